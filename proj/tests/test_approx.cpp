#include "doctest.h"

#include <cmath>

#include "uppex/approx.hpp"
#include "uppex/oracle.hpp"

using namespace uppex;

namespace {

// Precise two-state chain: from "g" leave to "b" with probability 1/2,
// "b" absorbs. Hitting {b}: P(hit by n) = 1 - 2^-n, expected time 2.
ImpreciseTree chain(double leave = 0.5) {
    LocalModel g = make_local_model({"g", "b"}, {{1.0 - leave, leave}});
    LocalModel b = make_local_model({"g", "b"}, {{0.0, 1.0}});
    return ImpreciseTree::stationary({"g", "b"}, g, {{"g", g}, {"b", b}});
}

} // namespace

TEST_CASE("hitting probability trace of the geometric chain") {
    ImpreciseTree t = chain();
    ApproxResult r = upper_hitting_probability(t, {"b"}, Situation{});
    REQUIRE(r.trace.size() >= 3);
    CHECK(r.trace[0].second == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.trace[1].second == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(r.trace[2].second == doctest::Approx(0.875).epsilon(1e-12));
    CHECK(r.converged);
    CHECK_FALSE(r.divergence_flag);
    CHECK(std::fabs(r.estimate.finite() - 1.0) < 1e-6);
    CHECK(r.direction == Direction::up);
}

TEST_CASE("expected hitting time of the geometric chain is 2") {
    ImpreciseTree t = chain();
    ApproxResult up = upper_expected_hitting_time(t, {"b"}, Situation{});
    ApproxResult lo = lower_expected_hitting_time(t, {"b"}, Situation{});
    // Truncated values: 2 - 2^-n, increasing.
    CHECK(up.trace[0].second == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(up.trace[1].second == doctest::Approx(1.75).epsilon(1e-12));
    CHECK(up.converged);
    CHECK(std::fabs(up.estimate.finite() - 2.0) < 1e-6);
    CHECK(lo.converged);
    CHECK(std::fabs(lo.estimate.finite() - 2.0) < 1e-6);
}

TEST_CASE("conditioning scans strictly after the situation") {
    ImpreciseTree t = chain();
    // From "g,g" the future looks the same as from the root.
    ApproxResult from_root = upper_expected_hitting_time(t, {"b"}, Situation{});
    ApproxResult from_gg = upper_expected_hitting_time(t, {"b"}, Situation({"g", "g"}));
    CHECK(std::fabs(from_root.estimate.finite() - from_gg.estimate.finite()) < 1e-9);
    // From "b" the target sits strictly ahead, and "b" absorbs: hit at step 1.
    ApproxResult from_b = upper_expected_hitting_time(t, {"b"}, Situation({"b"}));
    CHECK(std::fabs(from_b.estimate.finite() - 1.0) < 1e-9);
}

TEST_CASE("lower hitting probability is the exact conjugate at every level") {
    CounterRng rng(9);
    for (int i = 0; i < 8; ++i) {
        InstanceOptions opts;
        opts.stationary_only = true;
        RandomInstance inst = sample_random_instance(rng, opts);
        std::vector<std::string> target{inst.tree.states[0]};

        ApproxOptions a;
        a.max_n = 10;
        ApproxResult lower = lower_hitting_probability(inst.tree, target, Situation{}, a);
        ApproxResult miss = monotone_limit(
            inst.tree, VariableSequenceSpec::miss(inst.tree, target), Situation{},
            Direction::down, a);
        REQUIRE(lower.trace.size() == miss.trace.size());
        for (std::size_t j = 0; j < lower.trace.size(); ++j)
            CHECK(lower.trace[j].second == 1.0 - miss.trace[j].second); // exact

        // And it matches an independent lower evaluation of the hit window.
        FinitaryVariable hit3 =
            generate_term(VariableSequenceSpec::hit(inst.tree, target), 3);
        const double direct =
            lower_exp_finitary_global(inst.tree, hit3, Situation{}).value.finite();
        CHECK(std::fabs(direct - lower.trace[2].second) <= 1e-12);
    }
}

TEST_CASE("monotone direction violations are internal errors") {
    ImpreciseTree t = chain();
    std::vector<FinitaryVariable> decreasing{
        FinitaryVariable::make_constant(ExtReal(2.0), 2),
        FinitaryVariable::make_constant(ExtReal(1.0), 2)};
    CHECK_THROWS_AS(monotone_limit(t, VariableSequenceSpec::user_list(decreasing), Situation{},
                                   Direction::up),
                    contract_error);
}

TEST_CASE("divergence heuristic flags an unbounded hitting time") {
    // Target unreachable: stay in "g" forever, so the truncated times are n+1.
    ImpreciseTree t = chain(0.0);
    ApproxOptions opts;
    opts.ceiling = 10.0;
    opts.max_n = 1000;
    ApproxResult r = upper_expected_hitting_time(t, {"b"}, Situation{}, opts);
    CHECK(r.divergence_flag);
    CHECK(r.estimate == ExtReal::pos_inf());

    // With the default ceiling the horizon cap wins: bracket, no flag.
    ApproxResult capped = upper_expected_hitting_time(t, {"b"}, Situation{});
    CHECK_FALSE(capped.divergence_flag);
    CHECK_FALSE(capped.converged);
    REQUIRE(capped.bracket.has_value());
    CHECK(capped.bracket->first == doctest::Approx(65.0).epsilon(1e-12));
    CHECK(capped.bracket->second == Direction::up);
}

TEST_CASE("lower-cut limits: convergent and divergent cases") {
    // Tree that never visits "a": the -inf entry is invisible.
    LocalModel point = make_local_model({"a", "b"}, {{0.0, 1.0}});
    ImpreciseTree avoid = ImpreciseTree::iid({"a", "b"}, point);
    FinitaryVariable f =
        FinitaryVariable::make_dense(1, 2, {ExtReal::neg_inf(), ExtReal(3.0)});
    std::vector<double> schedule{0.0, -4.0, -16.0, -64.0, -256.0};

    ApproxResult ok = lower_cut_global_limit(avoid, f, Situation{}, schedule);
    CHECK(ok.converged);
    CHECK(ok.estimate.finite() == 3.0);
    CHECK(ok.direction == Direction::down);

    // Tree that must put mass on "a": cuts run away, direct value is -inf.
    LocalModel half = make_local_model({"a", "b"}, {{0.5, 0.5}});
    ImpreciseTree must = ImpreciseTree::iid({"a", "b"}, half);
    std::vector<double> deep;
    for (double c = -1.0; c > -1e8; c *= 4.0) deep.push_back(c);
    ApproxResult div = lower_cut_global_limit(must, f, Situation{}, deep);
    CHECK(div.divergence_flag);
    CHECK(div.estimate == ExtReal::neg_inf());
}

TEST_CASE("imprecise chain: hitting bounds bracket the precise value") {
    // "g" leaves with probability somewhere in [0.3, 0.6].
    LocalModel g = make_local_model({"g", "b"}, {{0.7, 0.3}, {0.4, 0.6}});
    LocalModel b = make_local_model({"g", "b"}, {{0.0, 1.0}});
    ImpreciseTree t = ImpreciseTree::stationary({"g", "b"}, g, {{"g", g}, {"b", b}});

    ApproxOptions opts;
    opts.max_n = 64;
    ApproxResult up = upper_hitting_probability(t, {"b"}, Situation{}, opts);
    ApproxResult lo = lower_hitting_probability(t, {"b"}, Situation{}, opts);
    CHECK(up.estimate.finite() >= lo.estimate.finite() - 1e-12);
    CHECK(std::fabs(up.estimate.finite() - 1.0) < 1e-6); // hit almost surely either way

    ApproxResult t_up = upper_expected_hitting_time(t, {"b"}, Situation{}, opts);
    ApproxResult t_lo = lower_expected_hitting_time(t, {"b"}, Situation{}, opts);
    // Bernoulli hitting with rate p has mean 1/p; the envelope picks the ends.
    CHECK(t_up.estimate.finite() == doctest::Approx(1.0 / 0.3).epsilon(1e-6));
    CHECK(t_lo.estimate.finite() == doctest::Approx(1.0 / 0.6).epsilon(1e-6));
}
