#include "doctest.h"

#include <array>

#include "uppex/variables.hpp"

using namespace uppex;

namespace {

const ExtReal pinf = ExtReal::pos_inf();
const ExtReal ninf = ExtReal::neg_inf();

std::vector<int> w(std::initializer_list<int> xs) { return std::vector<int>(xs); }

ImpreciseTree two_state_tree() {
    LocalModel m = make_local_model({"a", "b"}, {{0.5, 0.5}});
    return ImpreciseTree::iid({"a", "b"}, m);
}

} // namespace

TEST_CASE("dense indexing: first state is most significant") {
    // Depth 2 over {a,b}: order aa, ab, ba, bb.
    FinitaryVariable f = FinitaryVariable::make_dense(
        2, 2, {ExtReal(0.0), ExtReal(1.0), ExtReal(2.0), ExtReal(3.0)});
    CHECK(f.at(w({0, 0})).finite() == 0.0);
    CHECK(f.at(w({0, 1})).finite() == 1.0);
    CHECK(f.at(w({1, 0})).finite() == 2.0);
    CHECK(f.at(w({1, 1})).finite() == 3.0);
    // Extra states beyond the depth are ignored.
    CHECK(f.at(w({1, 0, 1})).finite() == 2.0);
    CHECK_THROWS_AS(f.at(w({1})), contract_error);
    CHECK_THROWS_AS(FinitaryVariable::make_dense(2, 2, {ExtReal(0.0)}), contract_error);
}

TEST_CASE("hit / miss / hitting time on words") {
    std::vector<char> target{0, 1}; // state b
    FinitaryVariable hit = FinitaryVariable::make_hit(3, 2, target);
    FinitaryVariable miss = FinitaryVariable::make_miss(3, 2, target);
    FinitaryVariable tau = FinitaryVariable::make_hitting_time(3, 2, target);

    CHECK(hit.at(w({0, 0, 0})).finite() == 0.0);
    CHECK(hit.at(w({0, 1, 0})).finite() == 1.0);
    CHECK(miss.at(w({0, 0, 0})).finite() == 1.0);
    CHECK(miss.at(w({1, 0, 0})).finite() == 0.0);
    CHECK(tau.at(w({1, 0, 0})).finite() == 1.0);
    CHECK(tau.at(w({0, 0, 1})).finite() == 3.0);
    CHECK(tau.at(w({0, 0, 0})).finite() == 4.0); // no hit: depth + 1
}

TEST_CASE("scan offset: states strictly after the conditioning history") {
    std::vector<char> target{0, 1};
    // Depth 4, offset 2: only positions 3 and 4 are scanned.
    FinitaryVariable tau = FinitaryVariable::make_hitting_time(4, 2, target, 2);
    CHECK(tau.at(w({1, 1, 0, 0})).finite() == 3.0); // no hit in the window: 2 + 1
    CHECK(tau.at(w({1, 1, 1, 0})).finite() == 1.0); // hit on the first scanned step
    CHECK(tau.at(w({0, 0, 0, 1})).finite() == 2.0);

    FinitaryVariable hit = FinitaryVariable::make_hit(4, 2, target, 2);
    CHECK(hit.at(w({1, 1, 0, 0})).finite() == 0.0);
    CHECK(hit.at(w({0, 0, 0, 1})).finite() == 1.0);

    CHECK_THROWS_AS(FinitaryVariable::make_hit(2, 2, target, 2), contract_error);
    CHECK_THROWS_AS(FinitaryVariable::make_hit(2, 2, std::vector<char>{0, 0}), contract_error);
}

TEST_CASE("constant_on matches evaluation") {
    std::vector<char> target{0, 1};
    FinitaryVariable tau = FinitaryVariable::make_hitting_time(3, 2, target);
    // Prefix already hit: constant on the whole subtree.
    auto c = tau.constant_on(w({0, 1}));
    REQUIRE(c.has_value());
    CHECK(c->finite() == 2.0);
    // Prefix not yet hit: not constant.
    CHECK_FALSE(tau.constant_on(w({0, 0})).has_value());
    // Full-length prefix: always the value.
    CHECK(tau.constant_on(w({0, 0, 0}))->finite() == 4.0);

    FinitaryVariable dense = FinitaryVariable::make_dense(1, 2, {ExtReal(1.0), ExtReal(2.0)});
    CHECK_FALSE(dense.constant_on(std::vector<int>{}).has_value());
}

TEST_CASE("densification agrees with lazy evaluation") {
    std::vector<char> target{0, 1};
    FinitaryVariable tau = FinitaryVariable::make_hitting_time(3, 2, target);
    FinitaryVariable dense = tau.to_dense();
    REQUIRE(dense.table().size() == 8);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                CHECK(dense.at(w({a, b, c})) == tau.at(w({a, b, c})));
    CHECK_THROWS_AS(FinitaryVariable::make_hit(40, 2, target).to_dense(), resource_error);
}

TEST_CASE("cuts and negation") {
    FinitaryVariable f = FinitaryVariable::make_dense(1, 2, {ninf, ExtReal(3.0)});
    CHECK(f.cut_below(-5.0).at(w({0})).finite() == -5.0);
    CHECK(f.cut_below(-5.0).at(w({1})).finite() == 3.0);
    CHECK(f.cut_above(1.0).at(w({1})).finite() == 1.0);
    CHECK(f.negated().at(w({0})) == pinf);
    CHECK_FALSE(f.bounded_below());
    CHECK(f.min_value() == ninf);
    CHECK(f.max_value().finite() == 3.0);
}

TEST_CASE("sequence specs generate the expected terms") {
    ImpreciseTree t = two_state_tree();

    VariableSequenceSpec hit = VariableSequenceSpec::hit(t, {"b"});
    FinitaryVariable h3 = generate_term(hit, 3);
    CHECK(h3.depth() == 3);
    CHECK(h3.kind() == FinitaryVariable::Kind::hit);

    VariableSequenceSpec tau = VariableSequenceSpec::hitting_time(t, {"b"}, 2);
    FinitaryVariable t1 = generate_term(tau, 1);
    CHECK(t1.depth() == 3); // offset 2 + window 1
    CHECK(t1.at(w({1, 1, 0})).finite() == 2.0);

    VariableSequenceSpec cuts = VariableSequenceSpec::lower_cut_family(
        FinitaryVariable::make_dense(1, 2, {ninf, ExtReal(1.0)}), {-1.0, -2.0, -4.0});
    CHECK(generate_term(cuts, 2).at(w({0})).finite() == -2.0);
    CHECK(cuts.length() == 3);
    CHECK_THROWS_AS(generate_term(cuts, 4), contract_error);

    CHECK_THROWS_AS(VariableSequenceSpec::hit(t, {"q"}), contract_error);
    CHECK_THROWS_AS(VariableSequenceSpec::hit(t, {}), contract_error);
}

TEST_CASE("measurability padding holds terms back until their depth fits") {
    auto dense = [](int depth, double v) {
        std::size_t size = 1;
        for (int i = 0; i < depth; ++i) size *= 2;
        return FinitaryVariable::make_dense(depth, 2, std::vector<ExtReal>(size, ExtReal(v)));
    };
    std::vector<FinitaryVariable> seq{dense(2, 10.0), dense(2, 20.0), dense(5, 30.0)};
    std::vector<FinitaryVariable> padded = pad_to_n_measurable(seq, ExtReal(-1.0), 2);

    REQUIRE(padded.size() == 5);
    // n = 1: the first input needs depth 2, so the constant fills in.
    CHECK(padded[0].depth() == 0);
    CHECK(padded[0].table()[0].finite() == -1.0);
    CHECK(padded[1].table()[0].finite() == 10.0);
    CHECK(padded[2].table()[0].finite() == 20.0);
    CHECK(padded[3].table()[0].finite() == 20.0); // depth-5 term not yet admissible
    CHECK(padded[4].table()[0].finite() == 30.0);
    for (std::size_t n = 0; n < padded.size(); ++n)
        CHECK(padded[n].depth() <= static_cast<int>(n) + 1);
}

TEST_CASE("variable JSON: finitary tables and hitting kinds") {
    ImpreciseTree t = two_state_tree();

    ParsedVariable fin = parse_variable(
        R"({"kind":"finitary","depth":2,"table":{"a,a":1.0,"a,b":2.0,"b,a":3.0,"b,b":"-inf"}})", t);
    REQUIRE(fin.finitary.has_value());
    CHECK(fin.finitary->at(w({0, 1})).finite() == 2.0);
    CHECK(fin.finitary->at(w({1, 1})) == ninf);

    ParsedVariable hit = parse_variable(R"({"kind":"hit","target":["b"]})", t);
    REQUIRE(hit.sequence.has_value());
    CHECK(hit.sequence->kind == VariableSequenceSpec::Kind::hit);

    CHECK_THROWS_AS(parse_variable(R"({"kind":"finitary","depth":1,"table":{"a":1.0}})", t),
                    parse_error);
    CHECK_THROWS_AS(parse_variable(R"({"kind":"hit","target":["z"]})", t), parse_error);
    CHECK_THROWS_AS(parse_variable(R"({"kind":"nope"})", t), parse_error);
}
