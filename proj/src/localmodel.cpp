#include "uppex/localmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "json.hpp"

namespace uppex {

using nlohmann::json;

// ---------------------------------------------------------------------------
// LocalVariable helpers

LocalVariable LocalVariable::cut_below(double c) const {
    LocalVariable out = *this;
    for (ExtReal& v : out.table) v = ext_max(v, ExtReal(c));
    return out;
}

LocalVariable LocalVariable::cut_above(double c) const {
    LocalVariable out = *this;
    for (ExtReal& v : out.table) v = ext_min(v, ExtReal(c));
    return out;
}

ExtReal LocalVariable::min_value() const {
    if (table.empty()) throw contract_error("min_value: empty variable");
    ExtReal m = table[0];
    for (ExtReal v : table) m = ext_min(m, v);
    return m;
}

ExtReal LocalVariable::max_value() const {
    if (table.empty()) throw contract_error("max_value: empty variable");
    ExtReal m = table[0];
    for (ExtReal v : table) m = ext_max(m, v);
    return m;
}

LocalVariable operator+(const LocalVariable& f, const LocalVariable& g) {
    if (f.size() != g.size()) throw contract_error("variable sum: size mismatch");
    LocalVariable out = f;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = ext_add(f[i], g[i]);
    return out;
}

LocalVariable operator-(const LocalVariable& f) {
    LocalVariable out = f;
    for (ExtReal& v : out.table) v = -v;
    return out;
}

LocalVariable scale(double lam, const LocalVariable& f) {
    LocalVariable out = f;
    for (ExtReal& v : out.table) v = ext_mul(ExtReal(lam), v);
    return out;
}

// ---------------------------------------------------------------------------
// LocalModel construction and envelopes

namespace {

std::string vertex_key(const std::vector<double>& p) {
    std::string key;
    char buf[40];
    for (double x : p) {
        std::snprintf(buf, sizeof(buf), "%.12f|", x);
        key += buf;
    }
    return key;
}

} // namespace

LocalModel make_local_model(std::vector<std::string> states,
                            std::vector<std::vector<double>> vertices) {
    if (states.empty()) throw contract_error("local model: empty state list");
    std::set<std::string> seen_states;
    for (const std::string& s : states) {
        if (s.find(',') != std::string::npos)
            throw contract_error("local model: state labels may not contain commas");
        if (!seen_states.insert(s).second)
            throw contract_error("local model: duplicate state label '" + s + "'");
    }
    if (vertices.empty()) throw contract_error("local model: no vertices");

    LocalModel m;
    m.states = std::move(states);
    std::set<std::string> seen_vertices;
    for (std::vector<double>& p : vertices) {
        if (p.size() != m.states.size())
            throw contract_error("local model: vertex size does not match state count");
        double sum = 0.0;
        for (double x : p) {
            if (std::isnan(x) || x < -1e-9)
                throw contract_error("local model: vertex entries must be non-negative");
            sum += x;
        }
        if (std::fabs(sum - 1.0) > 1e-9)
            throw contract_error("local model: vertex entries must sum to 1");
        if (seen_vertices.insert(vertex_key(p)).second)
            m.vertices.push_back(std::move(p));
    }
    return m;
}

ExtReal upper_exp_local(const LocalModel& m, const LocalVariable& f) {
    if (f.size() != m.arity())
        throw contract_error("upper_exp_local: variable size does not match model arity");
    ExtReal best = ExtReal::neg_inf();
    for (const std::vector<double>& p : m.vertices) {
        ExtReal acc(0.0);
        for (std::size_t i = 0; i < p.size(); ++i)
            acc = ext_add(acc, ext_mul(ExtReal(p[i]), f[i]));
        best = ext_max(best, acc);
    }
    return best;
}

ExtReal lower_exp_local(const LocalModel& m, const LocalVariable& f) {
    if (f.size() != m.arity())
        throw contract_error("lower_exp_local: variable size does not match model arity");
    ExtReal best = ExtReal::pos_inf();
    for (const std::vector<double>& p : m.vertices) {
        ExtReal acc(0.0);
        for (std::size_t i = 0; i < p.size(); ++i)
            acc = ext_add(acc, ext_mul(ExtReal(p[i]), f[i]));
        best = ext_min(best, acc);
    }
    return best;
}

UpperFunctional as_functional(const LocalModel& m) {
    return UpperFunctional{m.arity(), [m](const LocalVariable& f) { return upper_exp_local(m, f); }};
}

UpperFunctional sup_counterexample_functional(std::size_t arity) {
    return UpperFunctional{arity, [](const LocalVariable& f) -> ExtReal {
        bool has_neg_inf = false;
        bool all_below_pos_inf = true;
        for (ExtReal v : f.table) {
            if (v.is_neg_inf()) has_neg_inf = true;
            if (v.is_pos_inf()) all_below_pos_inf = false;
        }
        if (has_neg_inf && all_below_pos_inf) return ExtReal::neg_inf();
        return f.max_value();
    }};
}

// ---------------------------------------------------------------------------
// Cut limits

std::vector<double> upper_cut_trace(const UpperFunctional& e, const LocalVariable& f,
                                    const std::vector<double>& schedule) {
    std::vector<double> trace;
    trace.reserve(schedule.size());
    for (double c : schedule) trace.push_back(e(f.cut_above(c)).finite());
    return trace;
}

std::vector<double> lower_cut_trace(const UpperFunctional& e, const LocalVariable& f,
                                    const std::vector<double>& schedule) {
    std::vector<double> trace;
    trace.reserve(schedule.size());
    for (double c : schedule) trace.push_back(e(f.cut_below(c)).finite());
    return trace;
}

CutLimitResult upper_cut_limit(const LocalModel& m, const LocalVariable& f,
                               const std::vector<double>& schedule) {
    if (!f.bounded_below())
        throw contract_error("upper_cut_limit: variable must be bounded below");
    if (schedule.empty()) throw contract_error("upper_cut_limit: empty schedule");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (!(schedule[i] > schedule[i - 1]))
            throw contract_error("upper_cut_limit: schedule must be strictly increasing");

    CutLimitResult out;
    out.trace = upper_cut_trace(as_functional(m), f, schedule);
    out.diverging = upper_exp_local(m, f).is_pos_inf();
    out.value = out.diverging ? ExtReal::pos_inf() : ExtReal(out.trace.back());
    return out;
}

CutLimitResult lower_cut_limit(const LocalModel& m, const LocalVariable& f,
                               const std::vector<double>& schedule) {
    if (schedule.empty()) throw contract_error("lower_cut_limit: empty schedule");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (!(schedule[i] < schedule[i - 1]))
            throw contract_error("lower_cut_limit: schedule must be strictly decreasing");
    if (!f.bounded_above()) {
        // Cuts of a variable with +inf entries are not gambles, but the
        // envelope is still defined; nothing extra to do.
    }

    CutLimitResult out;
    std::vector<double> trace;
    trace.reserve(schedule.size());
    for (double c : schedule) {
        ExtReal v = upper_exp_local(m, f.cut_below(c));
        trace.push_back(v.is_pos_inf() ? std::numeric_limits<double>::infinity() : v.finite());
    }
    out.trace = std::move(trace);
    out.diverging = upper_exp_local(m, f).is_neg_inf();
    out.value = out.diverging ? ExtReal::neg_inf() : ExtReal(out.trace.back());
    return out;
}

// ---------------------------------------------------------------------------
// Axiom battery

namespace {

// a <= b up to tol, with the obvious meaning at infinities.
bool leq_tol(ExtReal a, ExtReal b, double tol) {
    if (a.is_neg_inf() || b.is_pos_inf()) return true;
    if (a.is_pos_inf()) return false;
    if (b.is_neg_inf()) return false;
    return a.raw() <= b.raw() + tol;
}

bool eq_tol(ExtReal a, ExtReal b, double tol) {
    return leq_tol(a, b, tol) && leq_tol(b, a, tol);
}

class BatteryRecorder {
public:
    explicit BatteryRecorder(AxiomReport& report) : report_(report) {}

    void record(const std::string& id, bool ok, const std::string& detail) {
        AxiomCheck& c = check(id);
        ++c.instances;
        if (!ok) {
            ++c.failures;
            if (c.details.size() < 4) c.details.push_back(detail);
        }
    }

private:
    AxiomCheck& check(const std::string& id) {
        for (AxiomCheck& c : report_.checks)
            if (c.id == id) return c;
        report_.checks.push_back(AxiomCheck{id, 0, 0, {}});
        return report_.checks.back();
    }

    AxiomReport& report_;
};

std::string describe(const LocalVariable& f) {
    std::string s = "(";
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) s += ",";
        s += to_text(f[i]);
    }
    return s + ")";
}

LocalVariable constant_var(std::size_t arity, ExtReal c) {
    LocalVariable f;
    f.table.assign(arity, c);
    return f;
}

} // namespace

const AxiomCheck* AxiomReport::find(const std::string& id) const {
    for (const AxiomCheck& c : checks)
        if (c.id == id) return &c;
    return nullptr;
}

bool AxiomReport::pass(const std::string& id) const {
    const AxiomCheck* c = find(id);
    return c != nullptr && c->pass();
}

bool AxiomReport::all_pass() const {
    for (const AxiomCheck& c : checks)
        if (!c.pass()) return false;
    return true;
}

AxiomReport check_local_axioms(const UpperFunctional& e,
                               const std::vector<LocalVariable>& batch,
                               double tol) {
    if (!e.eval) throw contract_error("check_local_axioms: empty functional");
    for (const LocalVariable& f : batch)
        if (f.size() != e.arity)
            throw contract_error("check_local_axioms: batch variable arity mismatch");

    AxiomReport report;
    BatteryRecorder rec(report);
    const std::size_t k = e.arity;

    auto low = [&](const LocalVariable& f) { return -e(-f); };

    std::vector<LocalVariable> bounded_below, gambles;
    for (const LocalVariable& f : batch) {
        if (f.bounded_below()) bounded_below.push_back(f);
        if (f.is_gamble()) gambles.push_back(f);
    }

    // E1: constants are their own upper expectation.
    for (double c : {-3.0, -1.0, 0.0, 0.5, 2.0, 10.0}) {
        LocalVariable f = constant_var(k, ExtReal(c));
        rec.record("E1", eq_tol(e(f), ExtReal(c), tol), "constant " + to_text(ExtReal(c)));
    }

    auto pair_of = [](const std::vector<LocalVariable>& v, std::size_t i)
        -> std::pair<const LocalVariable&, const LocalVariable&> {
        return {v[i], v[(i + 1) % v.size()]};
    };

    // E2 / E2': subadditivity on bounded-below pairs and on arbitrary pairs.
    for (std::size_t i = 0; i < bounded_below.size(); ++i) {
        auto [f, g] = pair_of(bounded_below, i);
        rec.record("E2", leq_tol(e(f + g), ext_add(e(f), e(g)), tol), describe(f) + "+" + describe(g));
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
        auto [f, g] = pair_of(batch, i);
        rec.record("E2'", leq_tol(e(f + g), ext_add(e(f), e(g)), tol), describe(f) + "+" + describe(g));
    }

    // E3 / E3' / E9: positive homogeneity, including lambda = 0.
    for (double lam : {0.5, 2.0, 7.0}) {
        for (const LocalVariable& f : bounded_below)
            rec.record("E3", eq_tol(e(scale(lam, f)), ext_mul(ExtReal(lam), e(f)),
                                    tol * std::max(1.0, lam)),
                       "lambda=" + std::to_string(lam) + " " + describe(f));
        for (const LocalVariable& f : batch)
            rec.record("E3'", eq_tol(e(scale(lam, f)), ext_mul(ExtReal(lam), e(f)),
                                     tol * std::max(1.0, lam)),
                       "lambda=" + std::to_string(lam) + " " + describe(f));
    }
    for (const LocalVariable& f : batch)
        rec.record("E9", eq_tol(e(scale(0.0, f)), ExtReal(0.0), tol), describe(f));

    // E4 / E4': monotonicity against dominating variables f + h, h >= 0.
    {
        LocalVariable h = constant_var(k, ExtReal(0.0));
        if (!gambles.empty()) {
            h = gambles[0];
            double lo = h.min_value().finite();
            for (ExtReal& v : h.table) v = ExtReal(v.finite() - lo);
        }
        for (const LocalVariable& f : bounded_below)
            rec.record("E4", leq_tol(e(f), e(f + h), tol), describe(f));
        for (const LocalVariable& f : batch)
            rec.record("E4'", leq_tol(e(f), e(f + h), tol), describe(f));
    }

    // E5 surrogate for finite outcome sets (E12): for non-negative f,
    // E((+inf) f) = (+inf) E(f).
    for (const LocalVariable& g : gambles) {
        LocalVariable f = g;
        double lo = f.min_value().finite();
        for (ExtReal& v : f.table) v = ExtReal(v.finite() - lo);
        LocalVariable inf_f = f;
        for (ExtReal& v : inf_f.table) v = ext_mul(ExtReal::pos_inf(), v);
        bool ok = eq_tol(e(inf_f), ext_mul(ExtReal::pos_inf(), e(f)), tol);
        rec.record("E5", ok, describe(f));
        rec.record("E12", ok, describe(f));
    }

    // E7: bounds for bounded-below variables.
    for (const LocalVariable& f : bounded_below)
        rec.record("E7", leq_tol(f.min_value(), e(f), tol) && leq_tol(e(f), f.max_value(), tol),
                   describe(f));

    // E8: constant shifts, real and +inf.
    for (const LocalVariable& f : bounded_below) {
        for (double mu : {-2.5, 3.0}) {
            LocalVariable g = f + constant_var(k, ExtReal(mu));
            rec.record("E8", eq_tol(e(g), ext_add(e(f), ExtReal(mu)), tol),
                       "mu=" + std::to_string(mu) + " " + describe(f));
        }
        LocalVariable g = f + constant_var(k, ExtReal::pos_inf());
        rec.record("E8", eq_tol(e(g), ExtReal::pos_inf(), tol), "mu=inf " + describe(f));
    }

    // E10: mixed chain on gamble pairs.
    for (std::size_t i = 0; i < gambles.size(); ++i) {
        auto [f, g] = pair_of(gambles, i);
        bool ok = leq_tol(low(f + g), ext_add(e(f), low(g)), tol) &&
                  leq_tol(ext_add(e(f), low(g)), e(f + g), tol);
        rec.record("E10", ok, describe(f) + "," + describe(g));
    }

    // E11 / C7: uniform convergence along f + 1/n.
    for (const LocalVariable& f : gambles) {
        bool ok = true;
        for (int n = 1; n <= 16; n *= 2) {
            LocalVariable fn = f + constant_var(k, ExtReal(1.0 / n));
            ExtReal a = e(fn), b = e(f);
            if (!a.is_finite() || !b.is_finite()) {
                if (a != b) ok = false;
            } else if (std::fabs(a.raw() - b.raw()) > 1.0 / n + tol) {
                ok = false;
            }
        }
        rec.record("E11", ok, describe(f));
        rec.record("C7", ok, describe(f));
    }

    // E13: countable subadditivity, finite truncations of non-negative families.
    if (gambles.size() >= 2) {
        for (std::size_t i = 0; i + 2 < gambles.size() + 1; i += 2) {
            std::vector<LocalVariable> fam;
            for (std::size_t j = i; j < std::min(i + 3, gambles.size()); ++j) {
                LocalVariable f = gambles[j];
                double lo = f.min_value().finite();
                for (ExtReal& v : f.table) v = ExtReal(v.finite() - lo);
                fam.push_back(f);
            }
            LocalVariable total = constant_var(k, ExtReal(0.0));
            ExtReal sum_e(0.0);
            for (const LocalVariable& f : fam) {
                total = total + f;
                sum_e = ext_add(sum_e, e(f));
            }
            rec.record("E13", leq_tol(e(total), sum_e, tol), "family at " + std::to_string(i));
        }
    }

    // E6: lower-cut continuity, limit of E(max(f, c)) as c -> -inf.
    {
        std::vector<double> schedule;
        for (double c = -1.0; c > -1e15; c *= 4.0) schedule.push_back(c);
        for (const LocalVariable& f : batch) {
            ExtReal direct = e(f);
            std::vector<double> trace;
            bool finite_trace = true;
            for (double c : schedule) {
                ExtReal v = e(f.cut_below(c));
                if (!v.is_finite()) { finite_trace = false; break; }
                trace.push_back(v.finite());
            }
            bool ok;
            if (!finite_trace) {
                // Cuts already evaluate to +-inf; the limit can only match a
                // +-inf direct value.
                ok = !e(f.cut_below(schedule.back())).is_finite() &&
                     e(f.cut_below(schedule.back())) == direct;
            } else if (direct.is_finite()) {
                ok = std::fabs(trace.back() - direct.raw()) <= tol;
            } else if (direct.is_neg_inf()) {
                ok = trace.back() <= -1e9; // still heading down
            } else {
                ok = false; // finite cut trace cannot reach +inf
            }
            rec.record("E6", ok, describe(f));
        }
    }

    // E14: upper-cut continuity for bounded-below variables.
    {
        std::vector<double> schedule;
        for (double c = 1.0; c < 1e15; c *= 4.0) schedule.push_back(c);
        for (const LocalVariable& f : bounded_below) {
            ExtReal direct = e(f);
            std::vector<double> trace;
            for (double c : schedule) trace.push_back(e(f.cut_above(c)).finite());
            bool ok;
            if (direct.is_finite())
                ok = std::fabs(trace.back() - direct.raw()) <= tol;
            else if (direct.is_pos_inf())
                ok = trace.back() >= 1e9; // still heading up
            else
                ok = false;
            rec.record("E14", ok, describe(f));
        }
    }

    // Coherence battery C1-C6 on gambles (C7 recorded with E11 above).
    for (const LocalVariable& f : gambles) {
        rec.record("C1", leq_tol(e(f), f.max_value(), tol), describe(f));
        rec.record("C5",
                   leq_tol(f.min_value(), low(f), tol) && leq_tol(low(f), e(f), tol) &&
                       leq_tol(e(f), f.max_value(), tol),
                   describe(f));
        for (double mu : {-4.0, 1.25}) {
            LocalVariable g = f + constant_var(k, ExtReal(mu));
            rec.record("C6", eq_tol(e(g), ext_add(e(f), ExtReal(mu)), tol),
                       "mu=" + std::to_string(mu) + " " + describe(f));
        }
    }
    for (std::size_t i = 0; i < gambles.size(); ++i) {
        auto [f, g] = pair_of(gambles, i);
        rec.record("C2", leq_tol(e(f + g), ext_add(e(f), e(g)), tol), describe(f));
        for (double lam : {0.5, 2.0})
            rec.record("C3", eq_tol(e(scale(lam, f)), ext_mul(ExtReal(lam), e(f)), tol),
                       describe(f));
        LocalVariable h = g;
        double lo = h.min_value().finite();
        for (ExtReal& v : h.table) v = ExtReal(v.finite() - lo);
        rec.record("C4", leq_tol(e(f), e(f + h), tol), describe(f));
    }

    return report;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

ExtReal extreal_from_json(const json& j) {
    if (j.is_number()) return ExtReal(j.get<double>());
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return ExtReal::pos_inf();
        if (s == "-inf") return ExtReal::neg_inf();
        throw parse_error("extended real: unknown string value '" + s + "'");
    }
    throw parse_error("extended real: expected a number or \"inf\"/\"-inf\"");
}

json extreal_to_json(ExtReal v) {
    if (v.is_pos_inf()) return json("inf");
    if (v.is_neg_inf()) return json("-inf");
    return json(v.raw());
}

LocalModel local_model_from_json(const json& j) {
    if (!j.is_object() || !j.contains("states") || !j.contains("vertices"))
        throw parse_error("local model: expected {\"states\": [...], \"vertices\": [[...]]}");
    std::vector<std::string> states = j.at("states").get<std::vector<std::string>>();
    std::vector<std::vector<double>> vertices =
        j.at("vertices").get<std::vector<std::vector<double>>>();
    try {
        return make_local_model(std::move(states), std::move(vertices));
    } catch (const contract_error& err) {
        throw parse_error(err.what());
    }
}

json local_model_as_json(const LocalModel& m) {
    return json{{"states", m.states}, {"vertices", m.vertices}};
}

} // namespace

LocalModel parse_local_model(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& err) {
        throw parse_error(std::string("local model: ") + err.what());
    }
    return local_model_from_json(j);
}

std::string local_model_to_json(const LocalModel& m) { return local_model_as_json(m).dump(); }

LocalVariable parse_local_variable(const std::string& json_text, std::size_t arity) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& err) {
        throw parse_error(std::string("local variable: ") + err.what());
    }
    if (!j.is_object() || !j.contains("table"))
        throw parse_error("local variable: expected {\"table\": {...}}");
    LocalVariable f;
    f.table.assign(arity, ExtReal(0.0));
    std::vector<bool> seen(arity, false);
    for (auto it = j.at("table").begin(); it != j.at("table").end(); ++it) {
        std::size_t idx;
        try {
            idx = std::stoul(it.key());
        } catch (...) {
            throw parse_error("local variable: bad outcome index '" + it.key() + "'");
        }
        if (idx >= arity) throw parse_error("local variable: outcome index out of range");
        f.table[idx] = extreal_from_json(it.value());
        seen[idx] = true;
    }
    for (std::size_t i = 0; i < arity; ++i)
        if (!seen[i]) throw parse_error("local variable: table must cover every outcome");
    return f;
}

// Shared by the tree / variable / process parsers.
ExtReal detail_extreal_from_json(const json& j) { return extreal_from_json(j); }
json detail_extreal_to_json(ExtReal v) { return extreal_to_json(v); }
LocalModel detail_local_model_from_json(const json& j) { return local_model_from_json(j); }
json detail_local_model_as_json(const LocalModel& m) { return local_model_as_json(m); }

} // namespace uppex
