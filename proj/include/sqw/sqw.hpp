// sqw.hpp — umbrella header
#pragma once

#include "sqw/errors.hpp"
#include "sqw/graph.hpp"
#include "sqw/numerics.hpp"
#include "sqw/scattering.hpp"
#include "sqw/unitary_walk.hpp"
#include "sqw/grover_spectral.hpp"
#include "sqw/open_walk.hpp"
#include "sqw/induced_walk.hpp"
