#pragma once

#include "morseflow/chain.hpp"
#include "morseflow/error.hpp"
#include "morseflow/field.hpp"
#include "morseflow/format.hpp"
#include "morseflow/graph.hpp"
#include "morseflow/hybrid.hpp"
#include "morseflow/io.hpp"
#include "morseflow/limits.hpp"
#include "morseflow/metric.hpp"
#include "morseflow/morse.hpp"
#include "morseflow/parallel.hpp"
#include "morseflow/scc.hpp"
#include "morseflow/scenarios.hpp"
#include "morseflow/signal.hpp"
#include "morseflow/symbolic.hpp"
