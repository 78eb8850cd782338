#pragma once

#include "bidfair/analysis.hpp"
#include "bidfair/game.hpp"
#include "bidfair/instance.hpp"
#include "bidfair/instance_gen.hpp"
#include "bidfair/item_set.hpp"
#include "bidfair/lp.hpp"
#include "bidfair/poly_wrapper.hpp"
#include "bidfair/rational.hpp"
#include "bidfair/scenario.hpp"
#include "bidfair/shares.hpp"
#include "bidfair/strategies.hpp"
#include "bidfair/valuation.hpp"
