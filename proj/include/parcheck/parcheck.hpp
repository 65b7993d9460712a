#pragma once

#include "parcheck/algorithms/registry.hpp"
#include "parcheck/engine.hpp"
#include "parcheck/explicit_graph.hpp"
#include "parcheck/lasso.hpp"
#include "parcheck/model.hpp"
#include "parcheck/model_parser.hpp"
#include "parcheck/model_source.hpp"
#include "parcheck/partition.hpp"
#include "parcheck/product.hpp"
#include "parcheck/property.hpp"
#include "parcheck/random_graph.hpp"
#include "parcheck/tarjan_oracle.hpp"
#include "parcheck/verdict.hpp"
