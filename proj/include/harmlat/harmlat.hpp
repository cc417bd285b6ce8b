#pragma once

// Umbrella header. The oracle module pulls in Eigen and is kept separate;
// include <harmlat/oracle.hpp> explicitly where the brute-force references
// are wanted.

#include "harmlat/covariance.hpp"
#include "harmlat/entanglement.hpp"
#include "harmlat/errors.hpp"
#include "harmlat/lattice.hpp"
#include "harmlat/numeric.hpp"
#include "harmlat/quadrature.hpp"
#include "harmlat/sweep.hpp"
#include "harmlat/version.hpp"
#include "harmlat/witness.hpp"
