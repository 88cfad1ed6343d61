#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uppex/globalexp.hpp"
#include "uppex/tree.hpp"
#include "uppex/variables.hpp"

namespace uppex {

enum class Direction { up, down };

struct ApproxOptions {
    double tol = 1e-9;        // convergence: |delta| below this ...
    int k_stable = 3;         // ... for this many consecutive steps
    int max_n = 64;           // horizon cap
    double ceiling = 1e6;     // divergence heuristic: value beyond this ...
    double min_increment = 1e-6; // ... while still gaining at least this per step
    std::size_t budget = 1000000;
    bool use_lower = false;   // evaluate with the lower (min) envelopes instead
};

struct ApproxResult {
    ExtReal estimate;
    std::vector<std::pair<int, double>> trace; // (n, value at horizon n)
    Direction direction = Direction::up;
    bool converged = false;
    bool divergence_flag = false;
    // One-sided bracket when not converged: the last value bounds the limit
    // from below (up) or above (down).
    std::optional<std::pair<double, Direction>> bracket;
};

// Evaluates the conditional (upper, or lower with use_lower) expectation of
// generate_term(spec, n) at s for n = 1, 2, ..., checking the trace really
// is monotone in `direction` (within 1e-9; a violation is an internal
// consistency error and throws). Stops on convergence (k_stable consecutive
// steps under tol), on the divergence heuristic (flagged), or at max_n
// (bracket only).
ApproxResult monotone_limit(const ImpreciseTree& t, const VariableSequenceSpec& spec,
                            const Situation& s, Direction direction,
                            const ApproxOptions& opts = {});

// Upper probability of ever hitting `target` strictly after s: non-
// decreasing horizon trace of hit-window variables.
ApproxResult upper_hitting_probability(const ImpreciseTree& t,
                                       const std::vector<std::string>& target,
                                       const Situation& s, const ApproxOptions& opts = {});

// Lower probability of ever hitting `target` strictly after s, as the
// conjugate of the upper probability of never hitting within the horizon:
// at every horizon n, lower_hit(n) = 1 - upper_miss(n) exactly.
ApproxResult lower_hitting_probability(const ImpreciseTree& t,
                                       const std::vector<std::string>& target,
                                       const Situation& s, const ApproxOptions& opts = {});

// Upper / lower expected time to hit `target` strictly after s, via
// truncated hitting times (truncation value n + 1 at horizon n). The trace
// is non-decreasing; an unbounded hitting time shows up as divergence.
ApproxResult upper_expected_hitting_time(const ImpreciseTree& t,
                                         const std::vector<std::string>& target,
                                         const Situation& s, const ApproxOptions& opts = {});
ApproxResult lower_expected_hitting_time(const ImpreciseTree& t,
                                         const std::vector<std::string>& target,
                                         const Situation& s, const ApproxOptions& opts = {});

// Lower-cut limit of a (possibly -inf-valued) dense variable: evaluates the
// conditional upper expectation of max(f, c) along the decreasing schedule
// and compares the limit against the direct evaluation of f. A mismatch
// beyond tol is reported as an internal consistency failure (throws).
ApproxResult lower_cut_global_limit(const ImpreciseTree& t, const FinitaryVariable& f,
                                    const Situation& s, const std::vector<double>& schedule,
                                    const ApproxOptions& opts = {});

} // namespace uppex
