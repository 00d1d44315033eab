#pragma once

// Umbrella header for the core library. The command-line layer lives in
// abcfrac/cli.hpp and is kept out of here so library users do not pay for
// the argument parser.

#include "abcfrac/errors.hpp"
#include "abcfrac/grid.hpp"
#include "abcfrac/inequality.hpp"
#include "abcfrac/io.hpp"
#include "abcfrac/mittag_leffler.hpp"
#include "abcfrac/normalization.hpp"
#include "abcfrac/operators.hpp"
#include "abcfrac/rhs_registry.hpp"
#include "abcfrac/solver.hpp"
