#pragma once

#include "xfode/ad.hpp"
#include "xfode/data.hpp"
#include "xfode/error.hpp"
#include "xfode/evaluate.hpp"
#include "xfode/it2fls.hpp"
#include "xfode/metrics.hpp"
#include "xfode/model.hpp"
#include "xfode/model_io.hpp"
#include "xfode/partition.hpp"
#include "xfode/series.hpp"
#include "xfode/training.hpp"
#include "xfode/types.hpp"
