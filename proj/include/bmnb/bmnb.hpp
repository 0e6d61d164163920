#pragma once

#include "bmnb/blended.hpp"
#include "bmnb/dataset.hpp"
#include "bmnb/errors.hpp"
#include "bmnb/gaussian_nb.hpp"
#include "bmnb/harness.hpp"
#include "bmnb/matrix.hpp"
#include "bmnb/metrics.hpp"
#include "bmnb/pipeline.hpp"
#include "bmnb/preprocess.hpp"
#include "bmnb/threshold.hpp"
