#pragma once

// Umbrella header for the Jacobi hypergroup library.

#include "jacobi/clt.hpp"
#include "jacobi/error.hpp"
#include "jacobi/hypergroup.hpp"
#include "jacobi/jacobi_function.hpp"
#include "jacobi/limits.hpp"
#include "jacobi/measure.hpp"
#include "jacobi/params.hpp"
#include "jacobi/quadrature.hpp"
#include "jacobi/random.hpp"
#include "jacobi/specfun.hpp"
#include "jacobi/stats.hpp"
#include "jacobi/walk.hpp"
