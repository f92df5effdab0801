#pragma once

#include "analytic.hpp"
#include "bessel.hpp"
#include "config.hpp"
#include "csim.hpp"
#include "harness.hpp"
#include "ladder.hpp"
#include "qsim.hpp"
#include "units.hpp"
