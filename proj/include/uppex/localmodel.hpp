#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "uppex/extreal.hpp"

namespace uppex {

// Extended-real-valued variable on a finite outcome set; table[i] is the
// value at outcome i.
struct LocalVariable {
    std::vector<ExtReal> table;

    std::size_t size() const { return table.size(); }
    ExtReal& operator[](std::size_t i) { return table[i]; }
    ExtReal operator[](std::size_t i) const { return table[i]; }

    bool bounded_below() const {
        for (ExtReal v : table)
            if (v.is_neg_inf()) return false;
        return true;
    }
    bool bounded_above() const {
        for (ExtReal v : table)
            if (v.is_pos_inf()) return false;
        return true;
    }
    bool is_gamble() const { return bounded_below() && bounded_above(); }

    LocalVariable cut_below(double c) const; // pointwise max(f, c)
    LocalVariable cut_above(double c) const; // pointwise min(f, c)

    ExtReal min_value() const;
    ExtReal max_value() const;
};

LocalVariable operator+(const LocalVariable& f, const LocalVariable& g);
LocalVariable operator-(const LocalVariable& f);
LocalVariable scale(double lam, const LocalVariable& f); // ext_mul per entry

// Credal set over a finite outcome set, given by the (finitely many)
// extreme-point probability mass functions of its convex hull.
struct LocalModel {
    std::vector<std::string> states;
    std::vector<std::vector<double>> vertices; // each a pmf over states

    std::size_t arity() const { return states.size(); }
};

// Validating constructor used by parsers and test generators: checks pmf
// shape (non-negative entries summing to 1 within 1e-9) and removes
// duplicate vertices, comparing entries rounded to 12 decimals.
LocalModel make_local_model(std::vector<std::string> states,
                            std::vector<std::vector<double>> vertices);

// Upper envelope: max over vertices p of sum_x p(x) * f(x), the sum taken
// with extended-real conventions (order-independent because +inf absorbs).
ExtReal upper_exp_local(const LocalModel& m, const LocalVariable& f);

// Conjugate lower envelope, equal to -upper_exp_local(m, -f).
ExtReal lower_exp_local(const LocalModel& m, const LocalVariable& f);

// Any upper-expectation-like functional on variables of a fixed arity.
// Lets the axiom checker exercise both credal envelopes and synthetic
// counterexample functionals through one interface.
struct UpperFunctional {
    std::size_t arity = 0;
    std::function<ExtReal(const LocalVariable&)> eval;

    ExtReal operator()(const LocalVariable& f) const { return eval(f); }
};

UpperFunctional as_functional(const LocalModel& m);

// The sup-based counterexample functional: E(f) = -inf when f is everywhere
// < +inf and takes the value -inf somewhere, else sup f. Satisfies the core
// axioms (including their extended forms) but not lower-cut continuity.
UpperFunctional sup_counterexample_functional(std::size_t arity);

// Result of chasing a cut schedule: the trace of envelope values at each
// cut, the value at the final cut, and whether the trace was still running
// away (so the limit is +-inf rather than the last trace entry).
struct CutLimitResult {
    ExtReal value;
    std::vector<double> trace;
    bool diverging = false;
};

// Upper cuts f^c = min(f, c) for an increasing schedule c_1 < c_2 < ...;
// f must be bounded below. Recovers E(f) as the limit when the model has
// upward-cut continuity; diverging is set when the true value is +inf.
CutLimitResult upper_cut_limit(const LocalModel& m, const LocalVariable& f,
                               const std::vector<double>& schedule);

// Lower cuts f_c = max(f, c) for a decreasing schedule; recovers E(f) as
// c -> -inf for credal envelopes. diverging is set when the true value
// is -inf.
CutLimitResult lower_cut_limit(const LocalModel& m, const LocalVariable& f,
                               const std::vector<double>& schedule);

// Schedule-driven cut traces against an arbitrary functional (no comparison
// with a direct value; the caller decides what the trace means).
std::vector<double> upper_cut_trace(const UpperFunctional& e, const LocalVariable& f,
                                    const std::vector<double>& schedule);
std::vector<double> lower_cut_trace(const UpperFunctional& e, const LocalVariable& f,
                                    const std::vector<double>& schedule);

// One axiom / property verdict over a batch of variables.
struct AxiomCheck {
    std::string id;     // e.g. "E2", "E6", "C5"
    int instances = 0;  // how many concrete tests ran
    int failures = 0;
    std::vector<std::string> details; // first few failure descriptions
    bool pass() const { return failures == 0; }
};

struct AxiomReport {
    std::vector<AxiomCheck> checks;

    const AxiomCheck* find(const std::string& id) const;
    bool pass(const std::string& id) const;
    bool all_pass() const;
};

// Runs the full battery (constants, subadditivity, homogeneity, monotonicity,
// bounds, shift/scaling rules, countable subadditivity truncations, uniform
// continuity, cut-limit agreement, coherence C1-C7) against `e` using the
// given batch of variables plus derived ones. Numeric comparisons use `tol`.
AxiomReport check_local_axioms(const UpperFunctional& e,
                               const std::vector<LocalVariable>& batch,
                               double tol = 1e-9);

// JSON (de)serialization. Model documents look like
//   {"states": ["a","b"], "vertices": [[0.5,0.5],[0.2,0.8]]}
// and variable documents like
//   {"table": {"0": 0.0, "1": "inf"}}
LocalModel parse_local_model(const std::string& json_text);
std::string local_model_to_json(const LocalModel& m);
LocalVariable parse_local_variable(const std::string& json_text, std::size_t arity);

} // namespace uppex
