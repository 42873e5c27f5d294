#pragma once

#include "dgft/circulant.hpp"
#include "dgft/denoise.hpp"
#include "dgft/eulerian.hpp"
#include "dgft/gft.hpp"
#include "dgft/graph.hpp"
#include "dgft/io.hpp"
#include "dgft/rng.hpp"
#include "dgft/svd_basis.hpp"
#include "dgft/variation.hpp"
#include "dgft/version.hpp"
