#pragma once

#include <cstdint>
#include <vector>

#include "uppex/tree.hpp"
#include "uppex/variables.hpp"

namespace uppex {

// Deterministic counter-mode generator (splitmix64 over seed-xor-counter):
// the n-th draw depends only on (seed, n), so reruns and partial replays are
// exactly reproducible.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64();
    double next_unit();               // in [0, 1)
    int next_below(int n);            // in [0, n)
    double next_in(double lo, double hi);

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

struct OracleResult {
    double value = 0.0;
    std::size_t selections = 0; // precise assignments enumerated
};

// Independent reference for the backward recursion, for real-valued
// variables: enumerate every precise selection (one vertex per situation of
// length < depth(f)), compute each selection's ordinary expectation of f by
// forward weighting, and take the max (min for the lower version). The
// number of selections is the product of vertex counts over all interior
// situations; exceeding `budget` raises resource_error.
OracleResult brute_force_upper_exp(const ImpreciseTree& t, const FinitaryVariable& f,
                                   std::size_t budget = 1000000);
OracleResult brute_force_lower_exp(const ImpreciseTree& t, const FinitaryVariable& f,
                                   std::size_t budget = 1000000);

// Monte-Carlo sampler under one fixed precise selection, chosen by
// `selection_index` in the same enumeration order the brute-force oracle
// uses. Returns the empirical mean of f over `n_paths` sampled paths.
double sample_paths_mean(const ImpreciseTree& t, const FinitaryVariable& f,
                         std::size_t selection_index, int n_paths, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Deterministic instance sampling (oracle comparisons, stress batteries)

LocalModel random_local_model(CounterRng& rng, std::size_t n_states,
                              std::size_t max_vertices);

// Dense real-valued variable of the given depth with entries in [lo, hi].
FinitaryVariable random_dense_gamble(CounterRng& rng, std::size_t n_states, int depth,
                                     double lo, double hi);

struct InstanceOptions {
    std::size_t min_states = 2;
    std::size_t max_states = 3;
    int max_depth = 4;
    std::size_t max_vertices = 3;
    // Keep the brute-force selection product small enough to enumerate.
    std::size_t selection_cap = 20000;
    bool stationary_only = false;
    double lo = -10.0, hi = 10.0;
};

struct RandomInstance {
    ImpreciseTree tree;
    FinitaryVariable variable; // dense gamble, depth = tree walk horizon
};

// A random tree / variable pair whose brute-force selection count stays
// under opts.selection_cap (vertex counts are re-drawn smaller as needed).
RandomInstance sample_random_instance(CounterRng& rng, const InstanceOptions& opts = {});

} // namespace uppex
