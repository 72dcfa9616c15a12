#pragma once

#include "hyperlens/exact.hpp"
#include "hyperlens/exact_compare.hpp"
#include "hyperlens/geometry.hpp"
#include "hyperlens/montecarlo.hpp"
#include "hyperlens/oracle.hpp"
#include "hyperlens/rational.hpp"
#include "hyperlens/rng.hpp"
#include "hyperlens/types.hpp"
#include "hyperlens/version.hpp"
