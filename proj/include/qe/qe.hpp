#pragma once

// Umbrella header for the whole library.

#include "gf2k.hpp"
#include "binform.hpp"
#include "semilinear.hpp"
#include "surface.hpp"
#include "jacobian.hpp"
#include "fibers.hpp"
#include "torsors.hpp"
#include "autos.hpp"
#include "json_io.hpp"
