#pragma once

#include "steiner/error.hpp"
#include "steiner/weight.hpp"
#include "steiner/graph.hpp"
#include "steiner/graph_io.hpp"
#include "steiner/decomposition.hpp"
#include "steiner/nice_decomposition.hpp"
#include "steiner/td_io.hpp"
#include "steiner/oracle.hpp"
#include "steiner/bag_index.hpp"
#include "steiner/index_io.hpp"
#include "steiner/query.hpp"
#include "steiner/corpus.hpp"
