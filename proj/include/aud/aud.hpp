#pragma once

#include "aud/analytic.hpp"
#include "aud/distributions.hpp"
#include "aud/error.hpp"
#include "aud/experiments.hpp"
#include "aud/io.hpp"
#include "aud/random.hpp"
#include "aud/simulator.hpp"
#include "aud/statistics.hpp"
#include "aud/system.hpp"
#include "aud/validation.hpp"
#include "aud/version.hpp"
