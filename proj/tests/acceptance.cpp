// Acceptance battery: each case prints one PASS/FAIL line so the run doubles
// as a report. Tolerances are pinned here, next to the checks they guard.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "uppex/approx.hpp"
#include "uppex/globalexp.hpp"
#include "uppex/localmodel.hpp"
#include "uppex/martingale.hpp"
#include "uppex/oracle.hpp"

using namespace uppex;

namespace {

constexpr double kTolExact = 1e-12;   // identities that must hold to rounding
constexpr double kTolNumeric = 1e-9;  // envelope / recursion agreement
constexpr double kTolLimit = 1e-6;    // iterative limits

void verdict(int id, const char* name, bool ok) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, name);
    const std::string msg = "criterion " + std::to_string(id) + " (" + name + ")";
    CHECK_MESSAGE(ok, msg);
}

std::vector<LocalVariable> mixed_batch(CounterRng& rng, std::size_t arity, int count) {
    std::vector<LocalVariable> batch;
    for (int i = 0; i < count; ++i) {
        LocalVariable f;
        for (std::size_t j = 0; j < arity; ++j) {
            const double u = rng.next_unit();
            if (u < 0.06) f.table.push_back(ExtReal::neg_inf());
            else if (u > 0.94) f.table.push_back(ExtReal::pos_inf());
            else f.table.push_back(ExtReal(rng.next_in(-5.0, 5.0)));
        }
        batch.push_back(std::move(f));
    }
    return batch;
}

ImpreciseTree geometric_chain() {
    LocalModel g = make_local_model({"g", "b"}, {{0.5, 0.5}});
    LocalModel b = make_local_model({"g", "b"}, {{0.0, 1.0}});
    return ImpreciseTree::stationary({"g", "b"}, g, {{"g", g}, {"b", b}});
}

} // namespace

TEST_CASE("1: recursion equals the brute-force oracle on 200 seeded instances") {
    const auto start = std::chrono::steady_clock::now();
    CounterRng rng(0);
    bool ok = true;
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        RandomInstance inst = sample_random_instance(rng);
        const double up =
            upper_exp_finitary_global(inst.tree, inst.variable, Situation{}).value.finite();
        const double lo =
            lower_exp_finitary_global(inst.tree, inst.variable, Situation{}).value.finite();
        const double gap =
            std::max(std::fabs(up - brute_force_upper_exp(inst.tree, inst.variable).value),
                     std::fabs(lo - brute_force_lower_exp(inst.tree, inst.variable).value));
        worst = std::max(worst, gap);
        ok = ok && gap <= kTolNumeric;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("         max gap %.3g, %.1fs\n", worst, secs);
    verdict(1, "oracle equivalence, 200 instances", ok && secs < 60.0);
}

TEST_CASE("2: scaled indicators on the fixed-to-0 process are worthless") {
    LocalModel m0 = make_local_model({"0", "1"}, {{1.0, 0.0}});
    ImpreciseTree t = ImpreciseTree::iid({"0", "1"}, m0);
    bool ok = true;
    std::vector<FinitaryVariable> terms;
    for (double n : {1.0, 10.0, 1e6}) {
        FinitaryVariable f = FinitaryVariable::make_dense(1, 2, {ExtReal(0.0), ExtReal(n)});
        const ExtReal v = upper_exp_finitary_global(t, f, Situation{}).value;
        ok = ok && v.is_finite() && std::fabs(v.raw()) <= kTolExact;
        terms.push_back(f);
    }
    ApproxResult lim = monotone_limit(t, VariableSequenceSpec::user_list(terms), Situation{},
                                      Direction::up);
    ok = ok && !lim.divergence_flag && lim.estimate.is_finite() &&
         std::fabs(lim.estimate.raw()) <= kTolExact;
    verdict(2, "worthless unbounded indicators (tol 1e-12)", ok);
}

TEST_CASE("3: sup-based counterexample functional fails exactly where it should") {
    std::vector<LocalVariable> batch;
    batch.push_back(LocalVariable{{ExtReal::neg_inf(), ExtReal(0.0)}});
    batch.push_back(LocalVariable{{ExtReal(1.0), ExtReal(-2.0)}});
    batch.push_back(LocalVariable{{ExtReal(0.5), ExtReal(3.0)}});
    batch.push_back(LocalVariable{{ExtReal(-1.0), ExtReal(4.0)}});
    AxiomReport r = check_local_axioms(sup_counterexample_functional(2), batch);
    const bool ok = r.pass("E1") && r.pass("E2'") && r.pass("E3'") && r.pass("E4'") &&
                    r.pass("E5") && !r.pass("E6");
    verdict(3, "counterexample passes core axioms, fails lower-cut continuity", ok);
}

TEST_CASE("4: axiom battery over 50 random credal models") {
    CounterRng rng(4);
    bool ok = true;
    const char* ids[] = {"E1", "E2", "E2'", "E3", "E3'", "E4", "E4'", "E5",  "E6",  "E7",
                         "E8", "E9", "E10", "E11", "E12", "E13", "E14", "C1", "C2", "C3",
                         "C4", "C5", "C6",  "C7"};
    for (int i = 0; i < 50 && ok; ++i) {
        const std::size_t arity = 2 + static_cast<std::size_t>(rng.next_below(2));
        LocalModel m = random_local_model(rng, arity, 3);
        AxiomReport r = check_local_axioms(as_functional(m), mixed_batch(rng, arity, 100),
                                           kTolNumeric);
        for (const char* id : ids)
            if (!r.pass(id)) {
                const AxiomCheck* c = r.find(id);
                std::printf("         model %d fails %s (%s)\n", i, id,
                            c && !c->details.empty() ? c->details.front().c_str() : "?");
                ok = false;
            }
    }
    verdict(4, "full axiom battery on credal envelopes (tol 1e-9)", ok);
}

TEST_CASE("5: canonical processes verify and certify their own value") {
    CounterRng rng(5);
    bool ok = true;
    for (int i = 0; i < 100 && ok; ++i) {
        RandomInstance inst = sample_random_instance(rng);
        const int depth = inst.variable.depth();
        Process p = conditional_process(inst.tree, inst.variable, depth);
        ok = ok && verify_supermartingale(inst.tree, p, depth).ok();
        BoundCertificate cert = certify_upper_bound(inst.tree, p, inst.variable, Situation{});
        const double direct =
            upper_exp_finitary_global(inst.tree, inst.variable, Situation{}).value.finite();
        ok = ok && cert.valid && std::fabs(cert.bound.finite() - direct) <= kTolNumeric;
    }
    verdict(5, "conditional processes are certified supermartingale witnesses", ok);
}

TEST_CASE("6: hitting traces are monotone with exact complement conjugacy") {
    CounterRng rng(6);
    bool ok = true;
    for (int i = 0; i < 50 && ok; ++i) {
        InstanceOptions io;
        io.stationary_only = true;
        RandomInstance inst = sample_random_instance(rng, io);
        std::vector<std::string> target{
            inst.tree.states[static_cast<std::size_t>(rng.next_below(
                static_cast<int>(inst.tree.states.size())))]};
        ApproxOptions opts;
        opts.max_n = 16;

        // monotone_limit itself throws if a trace moves the wrong way.
        ApproxResult up = upper_hitting_probability(inst.tree, target, Situation{}, opts);
        ApproxResult lo = lower_hitting_probability(inst.tree, target, Situation{}, opts);
        ApproxResult tu = upper_expected_hitting_time(inst.tree, target, Situation{}, opts);
        ApproxResult miss = monotone_limit(
            inst.tree, VariableSequenceSpec::miss(inst.tree, target), Situation{},
            Direction::down, opts);

        ok = ok && !up.trace.empty() && !tu.trace.empty();
        // Exact complement identity at every truncation level.
        ok = ok && lo.trace.size() == miss.trace.size();
        for (std::size_t j = 0; ok && j < lo.trace.size(); ++j)
            ok = lo.trace[j].second == 1.0 - miss.trace[j].second;
        // Against an independent lower evaluation of the hit window.
        for (int n : {1, 3}) {
            FinitaryVariable hit_n =
                generate_term(VariableSequenceSpec::hit(inst.tree, target), n);
            const double direct =
                lower_exp_finitary_global(inst.tree, hit_n, Situation{}).value.finite();
            ok = ok && std::fabs(direct - lo.trace[static_cast<std::size_t>(n - 1)].second) <=
                           kTolExact;
        }
    }
    verdict(6, "monotone hitting traces, exact conjugacy", ok);
}

TEST_CASE("7: geometric chain limits reach their closed forms by n <= 64") {
    ImpreciseTree t = geometric_chain();
    ApproxOptions opts;
    opts.max_n = 64;
    ApproxResult tu = upper_expected_hitting_time(t, {"b"}, Situation{}, opts);
    ApproxResult tl = lower_expected_hitting_time(t, {"b"}, Situation{}, opts);
    ApproxResult pu = upper_hitting_probability(t, {"b"}, Situation{}, opts);
    bool ok = tu.converged && std::fabs(tu.estimate.finite() - 2.0) <= kTolLimit;
    ok = ok && tl.converged && std::fabs(tl.estimate.finite() - 2.0) <= kTolLimit;
    ok = ok && pu.converged && std::fabs(pu.estimate.finite() - 1.0) <= kTolLimit;
    verdict(7, "hitting time -> 2 and hitting probability -> 1 (tol 1e-6)", ok);
}

TEST_CASE("8: crossing transform on 100 sampled supermartingales") {
    CounterRng rng(8);
    bool ok = true;
    for (int i = 0; i < 100 && ok; ++i) {
        InstanceOptions io;
        io.stationary_only = true;
        io.max_depth = 3;
        io.lo = 0.0;
        io.hi = 6.0;
        RandomInstance inst = sample_random_instance(rng, io);
        const int depth = inst.variable.depth();
        Process p = normalize_at(conditional_process(inst.tree, inst.variable, depth),
                                 Situation{});
        const double a = rng.next_in(0.2, 0.9);
        const double b = a + rng.next_in(0.05, 1.0);
        CrossingResult r = doob_crossing(inst.tree, p, a, b, Situation{}, depth);

        ok = ok && verify_supermartingale(inst.tree, r.transformed, depth).ok();
        ok = ok && r.transformed.min_stored().finite() >= -kTolNumeric;
        for (const auto& [leaf, k] : r.leaf_upcrossings)
            ok = ok && r.transformed.at(leaf).finite() - 1.0 >=
                           (k - 1) * (b - a) - a - kTolNumeric;
    }
    verdict(8, "crossing transforms stay non-negative supermartingales with growth bound", ok);
}

TEST_CASE("9: bounded truncations certify the same root bound on gambles") {
    CounterRng rng(9);
    bool ok = true;
    for (int i = 0; i < 50 && ok; ++i) {
        RandomInstance inst = sample_random_instance(rng);
        const int depth = inst.variable.depth();
        Process p = conditional_process(inst.tree, inst.variable, depth);
        const double root = p.at(Situation{}).finite();
        // Cap at the largest payoff: enough for a bounded witness of the
        // same bound (capping at the root value itself can dip under f).
        const double cap = inst.variable.max_value().finite();
        Process pb = truncate_supermartingale(p, cap);

        ok = ok && verify_supermartingale(inst.tree, pb, depth).ok();
        ok = ok && pb.max_stored().finite() <= cap + kTolExact;
        BoundCertificate cert = certify_upper_bound(inst.tree, pb, inst.variable, Situation{});
        ok = ok && cert.valid && std::fabs(cert.bound.finite() - root) <= kTolNumeric;
    }
    verdict(9, "bounded witnesses suffice on gambles", ok);
}

TEST_CASE("10: two-term alternating sequences obey the liminf inequality") {
    CounterRng rng(10);
    bool ok = true;
    for (int i = 0; i < 50 && ok; ++i) {
        RandomInstance inst = sample_random_instance(rng);
        FinitaryVariable g0 = inst.variable;
        FinitaryVariable g1 = random_dense_gamble(rng, inst.tree.n_states(), g0.depth(),
                                                  -10.0, 10.0);
        std::vector<ExtReal> floor_table;
        for (std::size_t j = 0; j < g0.table().size(); ++j)
            floor_table.push_back(ext_min(g0.table()[j], g1.table()[j]));
        FinitaryVariable floor_var = FinitaryVariable::make_dense(
            g0.depth(), g0.n_states(), std::move(floor_table));

        // liminf of g0, g1, g0, g1, ... is the pointwise min.
        const double e_floor =
            upper_exp_finitary_global(inst.tree, floor_var, Situation{}).value.finite();
        const double e0 =
            upper_exp_finitary_global(inst.tree, g0, Situation{}).value.finite();
        const double e1 =
            upper_exp_finitary_global(inst.tree, g1, Situation{}).value.finite();
        ok = ok && e_floor <= std::min(e0, e1) + kTolNumeric;
    }
    verdict(10, "liminf bound on alternating sequences", ok);
}
