#pragma once

#include "setpack/audit.hpp"
#include "setpack/binocular.hpp"
#include "setpack/color_coding.hpp"
#include "setpack/conflict.hpp"
#include "setpack/hereditary.hpp"
#include "setpack/instance.hpp"
#include "setpack/local_search.hpp"
#include "setpack/normalizer.hpp"
#include "setpack/oracle.hpp"
#include "setpack/search_graph.hpp"
#include "setpack/solve.hpp"
#include "setpack/vertex_set.hpp"
