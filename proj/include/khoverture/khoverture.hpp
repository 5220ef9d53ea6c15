#ifndef KHOVERTURE_KHOVERTURE_HPP
#define KHOVERTURE_KHOVERTURE_HPP

#include "khoverture/algebra.hpp"
#include "khoverture/burnside.hpp"
#include "khoverture/chain_complex.hpp"
#include "khoverture/complexes.hpp"
#include "khoverture/corpus.hpp"
#include "khoverture/cube.hpp"
#include "khoverture/diagram.hpp"
#include "khoverture/functor_ops.hpp"
#include "khoverture/invariants.hpp"
#include "khoverture/parallel.hpp"
#include "khoverture/permutohedron.hpp"
#include "khoverture/resolution_cube.hpp"

#endif
