#pragma once

#include <string>
#include <vector>

namespace qkr {

/// One evaluated point of a sweep. `method` is one of analytic, quantum,
/// classical, gap_abs, gap_rel.
struct SweepRow {
  double kbar = 0.0;
  double phi_d = 0.0;
  int kicks = 0;
  double energy = 0.0;
  std::string method;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

/// A grid point that could not be evaluated (e.g. ladder truncation).
struct PointError {
  double kbar = 0.0;
  double phi_d = 0.0;
  std::string message;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<PointError> errors;
  std::string manifest;  // key = value text; empty for bare library sweeps
};

}  // namespace qkr
