#pragma once

// Everything except json_io.hpp, which additionally needs nlohmann/json.

#include "relic/clause.hpp"
#include "relic/coverage.hpp"
#include "relic/dataset.hpp"
#include "relic/dlab.hpp"
#include "relic/error.hpp"
#include "relic/eval.hpp"
#include "relic/facts.hpp"
#include "relic/learner.hpp"
#include "relic/model_io.hpp"
#include "relic/multisource.hpp"
#include "relic/saturate.hpp"
#include "relic/schema.hpp"
#include "relic/symbol.hpp"
#include "relic/synth.hpp"
