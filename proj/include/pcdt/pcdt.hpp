#pragma once

#include "analysis.hpp"
#include "circuit.hpp"
#include "error.hpp"
#include "generator.hpp"
#include "hard_instances.hpp"
#include "hk2.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "polynomial.hpp"
#include "transforms/binarize.hpp"
#include "transforms/derivative.hpp"
#include "transforms/duplicate.hpp"
#include "transforms/gm.hpp"
#include "transforms/normalize.hpp"
#include "transforms/reduce_depth.hpp"
#include "transforms/treeify.hpp"
