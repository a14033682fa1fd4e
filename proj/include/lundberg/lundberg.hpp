#pragma once

#include "lundberg/adjustment.hpp"
#include "lundberg/bounds.hpp"
#include "lundberg/distribution.hpp"
#include "lundberg/embedding.hpp"
#include "lundberg/errors.hpp"
#include "lundberg/excess.hpp"
#include "lundberg/io.hpp"
#include "lundberg/math.hpp"
#include "lundberg/montecarlo.hpp"
#include "lundberg/rng.hpp"
