#pragma once

// Walk on moving spheres for Ornstein-Uhlenbeck exit times.

#include "woms/analysis.hpp"
#include "woms/batch.hpp"
#include "woms/errors.hpp"
#include "woms/euler.hpp"
#include "woms/ou.hpp"
#include "woms/quadrature.hpp"
#include "woms/random.hpp"
#include "woms/spheroid.hpp"
#include "woms/walk.hpp"
