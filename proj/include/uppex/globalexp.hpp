#pragma once

#include <cstddef>
#include <unordered_map>

#include "uppex/martingale.hpp"
#include "uppex/tree.hpp"
#include "uppex/variables.hpp"

namespace uppex {

struct EvalResult {
    ExtReal value;
    std::size_t visited = 0; // situations whose value was actually computed
};

// Conditional upper expectation of a finitary variable given situation s,
// by backward recursion: leaves (length depth(f)) take the variable's value,
// and every interior situation takes the local upper envelope of its
// children's values. When s is at or beyond depth(f) the value is just f on
// that prefix.
//
// Structured variables prune subtrees they are constant on, and on
// stationary / iid trees their recursion is memoized by (length, last
// state), so hit-type queries stay cheap at deep horizons. Dense variables
// on explicit trees walk the full tree; `budget` caps the number of visited
// situations (resource_error beyond it).
EvalResult upper_exp_finitary_global(const ImpreciseTree& t, const FinitaryVariable& f,
                                     const Situation& s, std::size_t budget = 1000000);

// Conjugate lower value, computed with the lower local envelopes; equal to
// -upper_exp_finitary_global(t, -f, s) (asserted in tests, not computed that
// way, so structured variables need no negation support).
EvalResult lower_exp_finitary_global(const ImpreciseTree& t, const FinitaryVariable& f,
                                     const Situation& s, std::size_t budget = 1000000);

// The process s -> conditional upper expectation of f given s, tabulated for
// all situations of length <= max_depth (constant-extended beyond depth(f)
// by evaluating f on the prefix). This is the canonical supermartingale
// witness for the value of f.
Process conditional_process(const ImpreciseTree& t, const FinitaryVariable& f,
                            int max_depth, std::size_t budget = 1000000);

} // namespace uppex
