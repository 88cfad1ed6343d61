#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "uppex/tree.hpp"
#include "uppex/variables.hpp"

namespace uppex {

class FinitaryVariable;

// A real process: one extended-real value per situation up to `depth`,
// constant-extended along each branch beyond that (the value at a longer
// situation is the value at its length-`depth` prefix).
struct Process {
    int depth = 0;
    std::unordered_map<std::string, ExtReal> values; // key: serialized situation

    ExtReal at(const Situation& s) const;
    void set(const Situation& s, ExtReal v);
    bool has(const Situation& s) const;

    bool bounded_below() const; // no -inf among stored values
    ExtReal min_stored() const;
    ExtReal max_stored() const;
};

Process parse_process(const std::string& json_text);
std::string process_to_json(const Process& p);

struct SupermartingaleReport {
    struct Violation {
        Situation at;
        ExtReal local_value; // upper envelope of the children
        ExtReal process_value;
    };
    bool is_supermartingale = false;
    bool bounded_below = false;
    std::vector<Violation> violations;

    bool ok() const { return is_supermartingale && bounded_below; }
};

// Checks, for every situation of length < depth, that the local upper
// envelope of the child values does not exceed the value at the situation
// (within tol), and that the stored values are bounded below.
SupermartingaleReport verify_supermartingale(const ImpreciseTree& t, const Process& m,
                                             int depth, double tol = 1e-9);

struct BoundCertificate {
    bool valid = false;
    ExtReal bound;                 // m at the conditioning situation
    bool supermartingale_ok = false;
    bool leaf_floor_ok = false;    // m dominates f on every depth-level leaf
    std::vector<std::string> failures;
};

// Finite-horizon certificate that m witnesses an upper bound on the
// conditional upper expectation of f given s: m must verify as a
// bounded-below supermartingale over situations extending s up to `depth`
// (= depth(f) normally), and at every leaf t at that depth the running
// minimum of m over the last `window`+1 levels of the path must be >= f(t)
// - tol. When valid, m(s) is a certified upper bound.
BoundCertificate certify_upper_bound(const ImpreciseTree& t, const Process& m,
                                     const FinitaryVariable& f, const Situation& s,
                                     int window = 0, double tol = 1e-9);

// Countable-combination surrogate: weighted sum of finitely many processes,
// weights > 0. All inputs must share a common finite lower bound; the result
// is again bounded below, and supermartingality is preserved (checked by
// callers/tests, not here).
Process combine_supermartingales(const std::vector<Process>& ms,
                                 const std::vector<double>& weights);

// Pointwise min(m, B): a bounded process; supermartingality is preserved.
Process truncate_supermartingale(const Process& m, double B);

// Shift-and-scale so the result is everywhere >= 0 with value exactly 1 at
// t. Requires a finite value at t and finite stored values.
Process normalize_at(const Process& m, const Situation& t);

struct CrossingResult {
    Process transformed;                                    // the stopped/restarted process
    std::vector<std::pair<Situation, int>> leaf_upcrossings; // completed upcrossings per leaf
};

// Doob a-b crossing transform below situation t, horizon `depth` (absolute
// situation length, > |t|), for 0 < a < b. Requires m non-negative with
// m(t) = 1 (use normalize_at first). The transform holds m's value outside
// the subtree of t and only follows m's increments while the path is inside
// an a-to-b upcrossing attempt: tracking starts when the path value drops
// below a and stops (counting one completed upcrossing) when it then rises
// above b. The result is again a non-negative supermartingale whenever m is
// one, and at every leaf w at the horizon
//     transformed(w) - 1 >= (k - 1) * (b - a) - a
// where k is that leaf's completed upcrossing count.
CrossingResult doob_crossing(const ImpreciseTree& t, const Process& m, double a, double b,
                             const Situation& at, int depth);

} // namespace uppex
