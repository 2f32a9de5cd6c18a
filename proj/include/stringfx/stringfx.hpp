#pragma once

#include "stringfx/backtest.hpp"
#include "stringfx/csv.hpp"
#include "stringfx/errors.hpp"
#include "stringfx/experiments.hpp"
#include "stringfx/marketdata.hpp"
#include "stringfx/metrics.hpp"
#include "stringfx/objectives.hpp"
#include "stringfx/optimize.hpp"
#include "stringfx/pmbcs.hpp"
#include "stringfx/pmbsi.hpp"
#include "stringfx/selfeducate.hpp"
#include "stringfx/signal.hpp"
#include "stringfx/stringmap.hpp"
