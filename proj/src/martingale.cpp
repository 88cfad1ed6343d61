#include "uppex/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "json_detail.hpp"

namespace uppex {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Process

ExtReal Process::at(const Situation& s) const {
    const Situation* lookup = &s;
    Situation prefix;
    if (static_cast<int>(s.size()) > depth) {
        prefix.labels.assign(s.labels.begin(), s.labels.begin() + depth);
        lookup = &prefix; // constant extension along the branch
    }
    auto it = values.find(lookup->to_string());
    if (it == values.end())
        throw contract_error("process: no value at situation '" + lookup->to_string() + "'");
    return it->second;
}

void Process::set(const Situation& s, ExtReal v) {
    if (static_cast<int>(s.size()) > depth)
        throw contract_error("process: situation longer than the process depth");
    values[s.to_string()] = v;
}

bool Process::has(const Situation& s) const {
    return static_cast<int>(s.size()) <= depth && values.count(s.to_string()) > 0;
}

bool Process::bounded_below() const {
    for (const auto& [key, v] : values)
        if (v.is_neg_inf()) return false;
    return true;
}

ExtReal Process::min_stored() const {
    if (values.empty()) throw contract_error("process: empty");
    ExtReal m = values.begin()->second;
    for (const auto& [key, v] : values) m = ext_min(m, v);
    return m;
}

ExtReal Process::max_stored() const {
    if (values.empty()) throw contract_error("process: empty");
    ExtReal m = values.begin()->second;
    for (const auto& [key, v] : values) m = ext_max(m, v);
    return m;
}

Process parse_process(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& err) {
        throw parse_error(std::string("process: ") + err.what());
    }
    if (!j.is_object() || !j.contains("depth") || !j.contains("values"))
        throw parse_error("process: expected {\"depth\": D, \"values\": {...}}");
    Process p;
    p.depth = j.at("depth").get<int>();
    if (p.depth < 0) throw parse_error("process: negative depth");
    for (auto it = j.at("values").begin(); it != j.at("values").end(); ++it) {
        const Situation s = Situation::from_string(it.key());
        if (static_cast<int>(s.size()) > p.depth)
            throw parse_error("process: situation '" + it.key() + "' longer than depth");
        p.values[it.key()] = detail_extreal_from_json(it.value());
    }
    return p;
}

std::string process_to_json(const Process& p) {
    json values = json::object();
    for (const auto& [key, v] : p.values) values[key] = detail_extreal_to_json(v);
    return json{{"depth", p.depth}, {"values", values}}.dump();
}

// ---------------------------------------------------------------------------
// Verification and certificates

namespace {

bool leq_tol(ExtReal a, ExtReal b, double tol) {
    if (a.is_neg_inf() || b.is_pos_inf()) return true;
    if (a.is_pos_inf() || b.is_neg_inf()) return false;
    return a.raw() <= b.raw() + tol;
}

// Situations extending `from` by up to `extra` more steps, in BFS order.
std::vector<Situation> subtree_situations(const ImpreciseTree& t, const Situation& from,
                                          int extra) {
    std::vector<Situation> out{from};
    std::size_t level_begin = 0;
    for (int d = 0; d < extra; ++d) {
        const std::size_t level_end = out.size();
        for (std::size_t i = level_begin; i < level_end; ++i)
            for (const std::string& label : t.states)
                out.push_back(out[i].child(label));
        level_begin = level_end;
    }
    return out;
}

} // namespace

SupermartingaleReport verify_supermartingale(const ImpreciseTree& t, const Process& m,
                                             int depth, double tol) {
    if (depth > m.depth)
        throw contract_error("verify_supermartingale: depth exceeds the process depth");
    SupermartingaleReport report;
    report.bounded_below = m.bounded_below();
    report.is_supermartingale = true;
    for (const Situation& s : enumerate_situations(t, depth)) {
        if (static_cast<int>(s.size()) >= depth) continue;
        LocalVariable children;
        children.table.reserve(t.n_states());
        for (const std::string& label : t.states)
            children.table.push_back(m.at(s.child(label)));
        ExtReal local = upper_exp_local(t.local_model(s), children);
        if (!leq_tol(local, m.at(s), tol)) {
            report.is_supermartingale = false;
            if (report.violations.size() < 16)
                report.violations.push_back({s, local, m.at(s)});
        }
    }
    return report;
}

BoundCertificate certify_upper_bound(const ImpreciseTree& t, const Process& m,
                                     const FinitaryVariable& f, const Situation& s,
                                     int window, double tol) {
    BoundCertificate cert;
    const int depth = f.depth();
    cert.bound = m.at(s);

    // Supermartingale steps inside the subtree of s, up to the leaf level.
    cert.supermartingale_ok = true;
    if (!m.bounded_below()) {
        cert.supermartingale_ok = false;
        cert.failures.push_back("process is not bounded below");
    }
    const int extra = depth > static_cast<int>(s.size())
                          ? depth - static_cast<int>(s.size())
                          : 0;
    bool leaf_fail = false;
    std::vector<int> prefix;
    for (const Situation& w : subtree_situations(t, s, extra)) {
        if (static_cast<int>(w.size()) < depth) {
            LocalVariable children;
            children.table.reserve(t.n_states());
            for (const std::string& label : t.states)
                children.table.push_back(m.at(w.child(label)));
            ExtReal local = upper_exp_local(t.local_model(w), children);
            if (!leq_tol(local, m.at(w), tol)) {
                cert.supermartingale_ok = false;
                if (cert.failures.size() < 8)
                    cert.failures.push_back("supermartingale step fails at '" + w.to_string() + "'");
            }
            continue;
        }
        // Leaf: the running minimum of m over the last `window`+1 levels of
        // the path must dominate f there.
        prefix.clear();
        for (const std::string& label : w.labels)
            prefix.push_back(static_cast<int>(t.state_index(label)));
        ExtReal floor_val = m.at(w);
        Situation walk = w;
        for (int back = 0; back < window && walk.size() > s.size(); ++back) {
            walk.labels.pop_back();
            floor_val = ext_min(floor_val, m.at(walk));
        }
        if (!leq_tol(f.at(prefix), floor_val, tol)) {
            leaf_fail = true;
            if (cert.failures.size() < 8)
                cert.failures.push_back("leaf floor fails at '" + w.to_string() + "'");
        }
    }
    cert.leaf_floor_ok = !leaf_fail;

    cert.valid = cert.supermartingale_ok && cert.leaf_floor_ok;
    return cert;
}

Process combine_supermartingales(const std::vector<Process>& ms,
                                 const std::vector<double>& weights) {
    if (ms.empty() || ms.size() != weights.size())
        throw contract_error("combine: need matching, non-empty process and weight lists");
    for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w))
            throw contract_error("combine: weights must be positive reals");
    for (const Process& m : ms) {
        if (m.depth != ms[0].depth) throw contract_error("combine: depth mismatch");
        if (!m.bounded_below())
            throw contract_error("combine: every input must be bounded below");
    }

    Process out;
    out.depth = ms[0].depth;
    for (const auto& [key, v0] : ms[0].values) {
        ExtReal acc(0.0);
        for (std::size_t i = 0; i < ms.size(); ++i) {
            auto it = ms[i].values.find(key);
            if (it == ms[i].values.end())
                throw contract_error("combine: processes disagree on stored situations");
            acc = ext_add(acc, ext_mul(ExtReal(weights[i]), it->second));
        }
        out.values[key] = acc;
    }
    return out;
}

Process truncate_supermartingale(const Process& m, double B) {
    Process out = m;
    for (auto& [key, v] : out.values) v = ext_min(v, ExtReal(B));
    return out;
}

Process normalize_at(const Process& m, const Situation& t) {
    ExtReal at_t = m.at(t);
    if (!at_t.is_finite())
        throw contract_error("normalize_at: the process value at t must be finite");
    double lo = 0.0;
    for (const auto& [key, v] : m.values) {
        if (v.is_neg_inf()) throw contract_error("normalize_at: process is not bounded below");
        if (v.is_finite()) lo = std::min(lo, v.raw());
    }
    double shift = -lo; // lo <= 0 by construction
    if (at_t.raw() + shift <= 0.0) shift += 1.0;
    const double scale = 1.0 / (at_t.raw() + shift);

    Process out = m;
    for (auto& [key, v] : out.values)
        v = v.is_pos_inf() ? v : ExtReal((v.raw() + shift) * scale);
    return out;
}

CrossingResult doob_crossing(const ImpreciseTree& t, const Process& m, double a, double b,
                             const Situation& at, int depth) {
    if (!(0.0 < a && a < b)) throw contract_error("doob_crossing: need 0 < a < b");
    if (depth <= static_cast<int>(at.size()))
        throw contract_error("doob_crossing: horizon must extend past the start situation");
    if (depth > m.depth) throw contract_error("doob_crossing: horizon exceeds the process depth");
    for (const auto& [key, v] : m.values) {
        if (!v.is_finite() || v.raw() < -1e-12)
            throw contract_error("doob_crossing: process must be finite and non-negative");
    }
    const double at_value = m.at(at).raw();
    if (std::fabs(at_value - 1.0) > 1e-9)
        throw contract_error("doob_crossing: process must be normalized to 1 at the start");

    CrossingResult result;
    result.transformed.depth = depth;
    // Everything outside the subtree of `at` keeps the start value.
    for (const Situation& s : enumerate_situations(t, depth)) {
        bool below = s.size() > at.size() &&
                     std::equal(at.labels.begin(), at.labels.end(), s.labels.begin());
        if (!below) result.transformed.set(s, ExtReal(at_value));
    }

    // DFS through the subtree, following m's increments only while the path
    // is inside an a-to-b upcrossing attempt.
    struct Frame {
        Situation s;
        double value;    // transformed value at s
        double m_value;  // m at s
        bool tracking;   // currently between a drop below a and a rise above b
        int upcrossings; // completed so far on this path
    };
    std::vector<Frame> stack;
    stack.push_back({at, at_value, at_value, at_value < a, 0});
    while (!stack.empty()) {
        Frame fr = stack.back();
        stack.pop_back();
        result.transformed.set(fr.s, ExtReal(fr.value));
        if (static_cast<int>(fr.s.size()) == depth) {
            result.leaf_upcrossings.emplace_back(fr.s, fr.upcrossings);
            continue;
        }
        for (const std::string& label : t.states) {
            Frame child = fr;
            child.s = fr.s.child(label);
            child.m_value = m.at(child.s).raw();
            if (fr.tracking) child.value = fr.value + (child.m_value - fr.m_value);
            if (fr.tracking && child.m_value > b) {
                child.tracking = false;
                child.upcrossings = fr.upcrossings + 1;
            } else if (!fr.tracking && child.m_value < a) {
                child.tracking = true;
            }
            stack.push_back(child);
        }
    }
    return result;
}

} // namespace uppex
