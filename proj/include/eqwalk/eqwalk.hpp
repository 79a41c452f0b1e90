#pragma once

#include "analytic.hpp"
#include "bessel.hpp"
#include "density.hpp"
#include "experiments.hpp"
#include "geometry.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "sampler.hpp"
#include "types.hpp"
