// Command-line front end: evaluate conditional upper/lower expectations,
// approximate hitting quantities, and run the self-check batteries.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "uppex/approx.hpp"
#include "uppex/globalexp.hpp"
#include "uppex/localmodel.hpp"
#include "uppex/martingale.hpp"
#include "uppex/oracle.hpp"
#include "uppex/tree.hpp"
#include "uppex/variables.hpp"

using nlohmann::json;
using namespace uppex;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitResource = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json extreal_json(ExtReal v) {
    if (v.is_pos_inf()) return json("inf");
    if (v.is_neg_inf()) return json("-inf");
    return json(v.raw());
}

void emit(const json& doc, const std::string& format) {
    if (format == "json") {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    // Flat "table" rendering: key<TAB>value lines for result + diagnostics.
    auto flat = [](const json& j, const std::string& prefix, auto&& self) -> void {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
            if (it->is_object()) {
                self(*it, key, self);
            } else if (it->is_number_float()) {
                std::printf("%s\t%.12g\n", key.c_str(), it->get<double>());
            } else {
                std::cout << key << "\t"
                          << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
            }
        }
    };
    if (doc.contains("result")) flat(doc.at("result"), "result", flat);
    if (doc.contains("diagnostics")) flat(doc.at("diagnostics"), "diagnostics", flat);
}

void write_trace_csv(const std::string& path, const std::vector<std::pair<int, double>>& trace) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open trace file '" + path + "'");
    out << "n,value\n";
    for (const auto& [n, v] : trace) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        out << n << "," << buf << "\n";
    }
}

std::vector<std::string> split_labels(const std::string& csv) {
    return Situation::from_string(csv).labels;
}

// ---------------------------------------------------------------------------
// eval

int cmd_eval(const std::string& tree_path, const std::string& var_path,
             const std::string& situation, std::size_t budget, const std::string& format) {
    ImpreciseTree tree = parse_tree(read_file(tree_path));
    ParsedVariable pv = parse_variable(read_file(var_path), tree);
    if (!pv.finitary)
        throw contract_error("eval needs a finitary variable; use `hit` for hitting sequences");
    Situation s = Situation::from_string(situation);

    EvalResult up = upper_exp_finitary_global(tree, *pv.finitary, s, budget);
    EvalResult lo = lower_exp_finitary_global(tree, *pv.finitary, s, budget);

    json doc{{"command", "eval"},
             {"inputs", {{"tree", tree_path}, {"variable", var_path}, {"situation", situation}}},
             {"result", {{"upper", extreal_json(up.value)}, {"lower", extreal_json(lo.value)}}},
             {"diagnostics", {{"visited", up.visited + lo.visited}}}};
    emit(doc, format);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// hit

int cmd_hit(const std::string& tree_path, const std::string& target_csv,
            const std::string& mode, const std::string& situation, const ApproxOptions& opts,
            const std::string& format, const std::string& trace_csv) {
    ImpreciseTree tree = parse_tree(read_file(tree_path));
    std::vector<std::string> target = split_labels(target_csv);
    Situation s = Situation::from_string(situation);

    ApproxResult r;
    if (mode == "upper-prob") r = upper_hitting_probability(tree, target, s, opts);
    else if (mode == "lower-prob") r = lower_hitting_probability(tree, target, s, opts);
    else if (mode == "upper-time") r = upper_expected_hitting_time(tree, target, s, opts);
    else if (mode == "lower-time") r = lower_expected_hitting_time(tree, target, s, opts);
    else throw contract_error("unknown mode '" + mode + "'");

    if (!trace_csv.empty()) write_trace_csv(trace_csv, r.trace);

    json result{{"estimate", extreal_json(r.estimate)},
                {"converged", r.converged},
                {"diverging", r.divergence_flag},
                {"direction", r.direction == Direction::up ? "up" : "down"}};
    if (r.bracket)
        result["bracket"] = {{"value", r.bracket->first},
                             {"side", r.bracket->second == Direction::up ? "up" : "down"}};
    json doc{{"command", "hit"},
             {"inputs",
              {{"tree", tree_path}, {"target", target_csv}, {"mode", mode},
               {"situation", situation}}},
             {"result", result},
             {"diagnostics",
              {{"horizons", r.trace.size()},
               {"last_n", r.trace.empty() ? 0 : r.trace.back().first}}}};
    emit(doc, format);
    return r.divergence_flag ? kExitResource : kExitOk;
}

// ---------------------------------------------------------------------------
// check

std::vector<LocalVariable> random_batch(CounterRng& rng, std::size_t arity, int count) {
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

int check_axioms(const std::string& model_path, std::uint64_t seed, double tol,
                 const std::string& format) {
    CounterRng rng(seed);
    LocalModel model = model_path.empty()
                           ? random_local_model(rng, 2 + static_cast<std::size_t>(rng.next_below(2)), 3)
                           : parse_local_model(read_file(model_path));
    AxiomReport report = check_local_axioms(as_functional(model), random_batch(rng, model.arity(), 30), tol);

    json checks = json::object();
    for (const AxiomCheck& c : report.checks)
        checks[c.id] = {{"instances", c.instances}, {"failures", c.failures}};
    json doc{{"command", "check"},
             {"inputs", {{"kind", "axioms"}, {"model", model_path}, {"seed", seed}}},
             {"result", {{"pass", report.all_pass()}, {"checks", checks}}},
             {"diagnostics", {{"batch_size", 30}}}};
    emit(doc, format);
    return report.all_pass() ? kExitOk : kExitCheckFailed;
}

int check_supermartingale(const std::string& tree_path, const std::string& process_path,
                          int depth, double tol, const std::string& format) {
    ImpreciseTree tree = parse_tree(read_file(tree_path));
    Process m = parse_process(read_file(process_path));
    if (depth < 0) depth = m.depth;
    SupermartingaleReport report = verify_supermartingale(tree, m, depth, tol);

    json violations = json::array();
    for (const auto& v : report.violations)
        violations.push_back({{"situation", v.at.to_string()},
                              {"local", extreal_json(v.local_value)},
                              {"process", extreal_json(v.process_value)}});
    json doc{{"command", "check"},
             {"inputs", {{"kind", "supermartingale"}, {"tree", tree_path},
                         {"process", process_path}, {"depth", depth}}},
             {"result", {{"pass", report.ok()},
                         {"is_supermartingale", report.is_supermartingale},
                         {"bounded_below", report.bounded_below}}},
             {"diagnostics", {{"violations", violations}}}};
    emit(doc, format);
    return report.ok() ? kExitOk : kExitCheckFailed;
}

int check_oracle_compare(std::uint64_t seed, int count, double tol, const std::string& format) {
    CounterRng rng(seed);
    double worst = 0.0;
    int failures = 0;
    for (int i = 0; i < count; ++i) {
        RandomInstance inst = sample_random_instance(rng);
        const double up = upper_exp_finitary_global(inst.tree, inst.variable, Situation{})
                              .value.finite();
        const double lo = lower_exp_finitary_global(inst.tree, inst.variable, Situation{})
                              .value.finite();
        const double up_ref = brute_force_upper_exp(inst.tree, inst.variable).value;
        const double lo_ref = brute_force_lower_exp(inst.tree, inst.variable).value;
        const double gap = std::max(std::fabs(up - up_ref), std::fabs(lo - lo_ref));
        worst = std::max(worst, gap);
        if (gap > tol) ++failures;
    }
    json doc{{"command", "check"},
             {"inputs", {{"kind", "oracle-compare"}, {"seed", seed}, {"count", count}}},
             {"result", {{"pass", failures == 0}, {"failures", failures}, {"max_gap", worst}}},
             {"diagnostics", json::object()}};
    emit(doc, format);
    return failures == 0 ? kExitOk : kExitCheckFailed;
}

int check_regression_s8(const std::string& format) {
    // Binary process fixed to state "0": the step out of every situation puts
    // all mass on "0". Unbounded payoffs riding on "1" are worthless at every
    // scale, and the horizon limit agrees.
    LocalModel m0 = make_local_model({"0", "1"}, {{1.0, 0.0}});
    ImpreciseTree tree = ImpreciseTree::iid({"0", "1"}, m0);

    bool pass = true;
    json checks = json::object();
    std::vector<FinitaryVariable> terms;
    for (double n : {1.0, 10.0, 1e6}) {
        FinitaryVariable f =
            FinitaryVariable::make_dense(1, 2, {ExtReal(0.0), ExtReal(n)});
        const ExtReal v = upper_exp_finitary_global(tree, f, Situation{}).value;
        const bool ok = v.is_finite() && std::fabs(v.raw()) <= 1e-12;
        checks["scale_" + to_text(ExtReal(n))] = ok;
        pass = pass && ok;
        terms.push_back(f);
    }
    ApproxResult lim = monotone_limit(tree, VariableSequenceSpec::user_list(terms), Situation{},
                                      Direction::up);
    const bool lim_ok = !lim.divergence_flag && lim.estimate.is_finite() &&
                        std::fabs(lim.estimate.raw()) <= 1e-12;
    checks["horizon_limit"] = lim_ok;
    pass = pass && lim_ok;

    // The sup-based counterexample functional: core axioms hold, lower-cut
    // continuity must fail.
    std::vector<LocalVariable> batch;
    batch.push_back(LocalVariable{{ExtReal::neg_inf(), ExtReal(0.0)}});
    batch.push_back(LocalVariable{{ExtReal(1.0), ExtReal(-2.0)}});
    batch.push_back(LocalVariable{{ExtReal(0.5), ExtReal(3.0)}});
    AxiomReport fixture = check_local_axioms(sup_counterexample_functional(2), batch);
    const bool fixture_ok = fixture.pass("E1") && fixture.pass("E2'") && fixture.pass("E3'") &&
                            fixture.pass("E4'") && fixture.pass("E5") && !fixture.pass("E6");
    checks["counterexample_functional"] = fixture_ok;
    pass = pass && fixture_ok;

    json doc{{"command", "check"},
             {"inputs", {{"kind", "regression-s8"}}},
             {"result", {{"pass", pass}, {"checks", checks}}},
             {"diagnostics", json::object()}};
    emit(doc, format);
    return pass ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Upper/lower expectation engine for finite-state uncertain processes"};
    app.require_subcommand(1);

    std::string tree_path, var_path, situation, format = "table", trace_csv;
    std::string target_csv, mode = "upper-prob", kind, model_path, process_path;
    double tol = 1e-9;
    int max_n = 64, k_stable = 3, depth = -1, count = 50;
    std::size_t budget = 1000000;
    std::uint64_t seed = 0;

    CLI::App* eval = app.add_subcommand("eval", "Conditional upper/lower expectation");
    eval->add_option("--tree", tree_path)->required();
    eval->add_option("--variable", var_path)->required();
    eval->add_option("--situation", situation);
    eval->add_option("--budget", budget);
    eval->add_option("--format", format)->check(CLI::IsMember({"json", "table"}));

    CLI::App* hit = app.add_subcommand("hit", "Hitting probabilities and times");
    hit->add_option("--tree", tree_path)->required();
    hit->add_option("--target", target_csv)->required();
    hit->add_option("--mode", mode)
        ->check(CLI::IsMember({"upper-prob", "lower-prob", "upper-time", "lower-time"}));
    hit->add_option("--situation", situation);
    hit->add_option("--tol", tol);
    hit->add_option("--max-n", max_n);
    hit->add_option("--k-stable", k_stable);
    hit->add_option("--budget", budget);
    hit->add_option("--format", format)->check(CLI::IsMember({"json", "table"}));
    hit->add_option("--trace-csv", trace_csv);

    CLI::App* check = app.add_subcommand("check", "Self-check batteries");
    check->add_option("--kind", kind)
        ->required()
        ->check(CLI::IsMember({"axioms", "supermartingale", "oracle-compare", "regression-s8"}));
    check->add_option("--model", model_path);
    check->add_option("--tree", tree_path);
    check->add_option("--process", process_path);
    check->add_option("--depth", depth);
    check->add_option("--seed", seed);
    check->add_option("--count", count);
    check->add_option("--tol", tol);
    check->add_option("--format", format)->check(CLI::IsMember({"json", "table"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (eval->parsed()) return cmd_eval(tree_path, var_path, situation, budget, format);
        if (hit->parsed()) {
            ApproxOptions opts;
            opts.tol = tol;
            opts.max_n = max_n;
            opts.k_stable = k_stable;
            opts.budget = budget;
            return cmd_hit(tree_path, target_csv, mode, situation, opts, format, trace_csv);
        }
        if (kind == "axioms") return check_axioms(model_path, seed, tol, format);
        if (kind == "supermartingale")
            return check_supermartingale(tree_path, process_path, depth, tol, format);
        if (kind == "oracle-compare") return check_oracle_compare(seed, count, tol, format);
        return check_regression_s8(format);
    } catch (const resource_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const parse_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const contract_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
}
