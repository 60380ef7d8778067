#pragma once

#include "semilevy/classify.hpp"
#include "semilevy/config.hpp"
#include "semilevy/levy_models.hpp"
#include "semilevy/lln.hpp"
#include "semilevy/run.hpp"
#include "semilevy/schedule.hpp"
#include "semilevy/skeleton.hpp"
#include "semilevy/stats.hpp"
