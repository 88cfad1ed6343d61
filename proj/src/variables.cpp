#include "uppex/variables.hpp"

#include <algorithm>
#include <limits>

#include "json_detail.hpp"

namespace uppex {

using nlohmann::json;

// ---------------------------------------------------------------------------
// FinitaryVariable

namespace {

std::size_t pow_checked(std::size_t base, int exp, std::size_t budget) {
    std::size_t out = 1;
    for (int i = 0; i < exp; ++i) {
        if (out > budget / base) throw resource_error("finitary variable: table budget exceeded");
        out *= base;
    }
    return out;
}

} // namespace

FinitaryVariable FinitaryVariable::make_dense(int depth, std::size_t n_states,
                                              std::vector<ExtReal> table) {
    if (depth < 0) throw contract_error("finitary variable: negative depth");
    if (n_states == 0) throw contract_error("finitary variable: no states");
    std::size_t expect = 1;
    for (int i = 0; i < depth; ++i) expect *= n_states;
    if (table.size() != expect)
        throw contract_error("finitary variable: table size must be n_states^depth");
    FinitaryVariable f;
    f.kind_ = Kind::dense;
    f.depth_ = depth;
    f.n_states_ = n_states;
    f.table_ = std::move(table);
    return f;
}

FinitaryVariable FinitaryVariable::make_constant(ExtReal c, std::size_t n_states) {
    return make_dense(0, n_states, {c});
}

FinitaryVariable FinitaryVariable::make_hit(int depth, std::size_t n_states,
                                            std::vector<char> target_mask, int offset) {
    FinitaryVariable f;
    f.kind_ = Kind::hit;
    f.depth_ = depth;
    f.n_states_ = n_states;
    f.target_ = std::move(target_mask);
    f.offset_ = offset;
    if (depth <= 0) throw contract_error("finitary variable: structured kinds need depth >= 1");
    if (n_states == 0 || f.target_.size() != n_states)
        throw contract_error("finitary variable: target mask size must match state count");
    if (offset < 0 || offset >= depth)
        throw contract_error("finitary variable: scan offset must lie inside the depth");
    bool any = false;
    for (char c : f.target_) any = any || (c != 0);
    if (!any) throw contract_error("finitary variable: empty target set");
    return f;
}

FinitaryVariable FinitaryVariable::make_miss(int depth, std::size_t n_states,
                                             std::vector<char> target_mask, int offset) {
    FinitaryVariable f = make_hit(depth, n_states, std::move(target_mask), offset);
    f.kind_ = Kind::miss;
    return f;
}

FinitaryVariable FinitaryVariable::make_hitting_time(int depth, std::size_t n_states,
                                                     std::vector<char> target_mask, int offset) {
    FinitaryVariable f = make_hit(depth, n_states, std::move(target_mask), offset);
    f.kind_ = Kind::hitting_time;
    return f;
}

bool FinitaryVariable::bounded_below() const {
    if (kind_ != Kind::dense) return true;
    for (ExtReal v : table_)
        if (v.is_neg_inf()) return false;
    return true;
}

bool FinitaryVariable::bounded_above() const {
    if (kind_ != Kind::dense) return true;
    for (ExtReal v : table_)
        if (v.is_pos_inf()) return false;
    return true;
}

ExtReal FinitaryVariable::min_value() const {
    switch (kind_) {
    case Kind::dense: {
        ExtReal m = table_[0];
        for (ExtReal v : table_) m = ext_min(m, v);
        return m;
    }
    case Kind::hit:
    case Kind::miss:
        return ExtReal(0.0);
    case Kind::hitting_time:
        return ExtReal(1.0);
    }
    throw contract_error("finitary variable: bad kind");
}

ExtReal FinitaryVariable::max_value() const {
    switch (kind_) {
    case Kind::dense: {
        ExtReal m = table_[0];
        for (ExtReal v : table_) m = ext_max(m, v);
        return m;
    }
    case Kind::hit:
    case Kind::miss:
        return ExtReal(1.0);
    case Kind::hitting_time:
        return ExtReal(static_cast<double>(depth_ - offset_ + 1));
    }
    throw contract_error("finitary variable: bad kind");
}

std::size_t FinitaryVariable::dense_index(std::span<const int> word) const {
    std::size_t idx = 0;
    for (int i = 0; i < depth_; ++i) {
        const int x = word[static_cast<std::size_t>(i)];
        if (x < 0 || static_cast<std::size_t>(x) >= n_states_)
            throw contract_error("finitary variable: state index out of range");
        idx = idx * n_states_ + static_cast<std::size_t>(x);
    }
    return idx;
}

ExtReal FinitaryVariable::at(std::span<const int> prefix) const {
    if (prefix.size() < static_cast<std::size_t>(depth_))
        throw contract_error("finitary variable: prefix shorter than depth");
    if (kind_ == Kind::dense) return table_[dense_index(prefix)];
    for (int i = offset_; i < depth_; ++i) {
        if (target_[static_cast<std::size_t>(prefix[static_cast<std::size_t>(i)])]) {
            switch (kind_) {
            case Kind::hit: return ExtReal(1.0);
            case Kind::miss: return ExtReal(0.0);
            default: return ExtReal(static_cast<double>(i + 1 - offset_));
            }
        }
    }
    switch (kind_) {
    case Kind::hit: return ExtReal(0.0);
    case Kind::miss: return ExtReal(1.0);
    default: return ExtReal(static_cast<double>(depth_ - offset_ + 1));
    }
}

std::optional<ExtReal> FinitaryVariable::constant_on(std::span<const int> prefix) const {
    if (prefix.size() >= static_cast<std::size_t>(depth_)) return at(prefix);
    if (kind_ == Kind::dense) {
        if (depth_ == 0) return table_[0];
        return std::nullopt; // no structure to exploit
    }
    const int upto = std::min<int>(depth_, static_cast<int>(prefix.size()));
    for (int i = offset_; i < upto; ++i) {
        if (target_[static_cast<std::size_t>(prefix[static_cast<std::size_t>(i)])]) {
            switch (kind_) {
            case Kind::hit: return ExtReal(1.0);
            case Kind::miss: return ExtReal(0.0);
            default: return ExtReal(static_cast<double>(i + 1 - offset_));
            }
        }
    }
    return std::nullopt;
}

FinitaryVariable FinitaryVariable::to_dense(std::size_t budget) const {
    if (kind_ == Kind::dense) return *this;
    const std::size_t size = pow_checked(n_states_, depth_, budget);
    std::vector<ExtReal> table(size, ExtReal(0.0));
    std::vector<int> word(static_cast<std::size_t>(depth_), 0);
    for (std::size_t idx = 0; idx < size; ++idx) {
        std::size_t rest = idx;
        for (int i = depth_ - 1; i >= 0; --i) {
            word[static_cast<std::size_t>(i)] = static_cast<int>(rest % n_states_);
            rest /= n_states_;
        }
        table[idx] = at(word);
    }
    return make_dense(depth_, n_states_, std::move(table));
}

FinitaryVariable FinitaryVariable::cut_below(double c, std::size_t budget) const {
    FinitaryVariable f = to_dense(budget);
    for (ExtReal& v : f.table_) v = ext_max(v, ExtReal(c));
    return f;
}

FinitaryVariable FinitaryVariable::cut_above(double c, std::size_t budget) const {
    FinitaryVariable f = to_dense(budget);
    for (ExtReal& v : f.table_) v = ext_min(v, ExtReal(c));
    return f;
}

FinitaryVariable FinitaryVariable::negated(std::size_t budget) const {
    FinitaryVariable f = to_dense(budget);
    for (ExtReal& v : f.table_) v = -v;
    return f;
}

// ---------------------------------------------------------------------------
// VariableSequenceSpec

VariableSequenceSpec VariableSequenceSpec::user_list(std::vector<FinitaryVariable> terms) {
    if (terms.empty()) throw contract_error("sequence: empty user list");
    VariableSequenceSpec s;
    s.kind = Kind::user_list;
    s.n_states = terms[0].n_states();
    for (const FinitaryVariable& f : terms)
        if (f.n_states() != s.n_states)
            throw contract_error("sequence: terms disagree on state count");
    s.terms = std::move(terms);
    return s;
}

std::vector<char> target_mask_from_labels(const ImpreciseTree& t,
                                          const std::vector<std::string>& target) {
    if (target.empty()) throw contract_error("sequence: empty target set");
    std::vector<char> mask(t.n_states(), 0);
    for (const std::string& label : target) mask[t.state_index(label)] = 1;
    return mask;
}

VariableSequenceSpec VariableSequenceSpec::hit(const ImpreciseTree& t,
                                               const std::vector<std::string>& target,
                                               int offset) {
    VariableSequenceSpec s;
    s.kind = Kind::hit;
    s.target_mask = target_mask_from_labels(t, target);
    s.n_states = t.n_states();
    s.offset = offset;
    return s;
}

VariableSequenceSpec VariableSequenceSpec::miss(const ImpreciseTree& t,
                                                const std::vector<std::string>& target,
                                                int offset) {
    VariableSequenceSpec s = hit(t, target, offset);
    s.kind = Kind::miss;
    return s;
}

VariableSequenceSpec VariableSequenceSpec::hitting_time(const ImpreciseTree& t,
                                                        const std::vector<std::string>& target,
                                                        int offset) {
    VariableSequenceSpec s = hit(t, target, offset);
    s.kind = Kind::hitting_time;
    return s;
}

VariableSequenceSpec VariableSequenceSpec::lower_cut_family(FinitaryVariable base,
                                                            std::vector<double> schedule) {
    if (schedule.empty()) throw contract_error("sequence: empty cut schedule");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (!(schedule[i] < schedule[i - 1]))
            throw contract_error("sequence: cut schedule must be strictly decreasing");
    VariableSequenceSpec s;
    s.kind = Kind::lower_cut_family;
    s.n_states = base.n_states();
    s.base = std::move(base);
    s.cut_schedule = std::move(schedule);
    return s;
}

std::size_t VariableSequenceSpec::length() const {
    switch (kind) {
    case Kind::user_list: return terms.size();
    case Kind::lower_cut_family: return cut_schedule.size();
    default: return std::numeric_limits<std::size_t>::max();
    }
}

FinitaryVariable generate_term(const VariableSequenceSpec& spec, int n) {
    if (n < 1) throw contract_error("generate_term: n starts at 1");
    switch (spec.kind) {
    case VariableSequenceSpec::Kind::user_list:
        if (static_cast<std::size_t>(n) > spec.terms.size())
            throw contract_error("generate_term: past the end of the user list");
        return spec.terms[static_cast<std::size_t>(n - 1)];
    case VariableSequenceSpec::Kind::hit:
        return FinitaryVariable::make_hit(spec.offset + n, spec.n_states, spec.target_mask,
                                          spec.offset);
    case VariableSequenceSpec::Kind::miss:
        return FinitaryVariable::make_miss(spec.offset + n, spec.n_states, spec.target_mask,
                                           spec.offset);
    case VariableSequenceSpec::Kind::hitting_time:
        return FinitaryVariable::make_hitting_time(spec.offset + n, spec.n_states,
                                                   spec.target_mask, spec.offset);
    case VariableSequenceSpec::Kind::lower_cut_family:
        if (static_cast<std::size_t>(n) > spec.cut_schedule.size())
            throw contract_error("generate_term: past the end of the cut schedule");
        return spec.base->cut_below(spec.cut_schedule[static_cast<std::size_t>(n - 1)]);
    }
    throw contract_error("generate_term: bad kind");
}

std::vector<FinitaryVariable> pad_to_n_measurable(const std::vector<FinitaryVariable>& seq,
                                                  ExtReal c, std::size_t n_states) {
    std::vector<FinitaryVariable> out;
    FinitaryVariable prev = FinitaryVariable::make_constant(c, n_states);
    std::size_t next = 0; // index of the first input term not yet emitted
    for (int n = 1; next < seq.size(); ++n) {
        if (seq[next].depth() <= n) {
            prev = seq[next];
            ++next;
        }
        out.push_back(prev);
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON

ParsedVariable parse_variable(const std::string& json_text, const ImpreciseTree& t) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& err) {
        throw parse_error(std::string("variable: ") + err.what());
    }
    if (!j.is_object() || !j.contains("kind"))
        throw parse_error("variable: expected an object with a \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();

    ParsedVariable out;
    if (kind == "finitary") {
        if (!j.contains("depth") || !j.contains("table"))
            throw parse_error("variable: finitary kind needs \"depth\" and \"table\"");
        const int depth = j.at("depth").get<int>();
        if (depth < 0) throw parse_error("variable: negative depth");
        std::size_t size = 1;
        for (int i = 0; i < depth; ++i) {
            if (size > 1000000 / t.n_states())
                throw parse_error("variable: table too large to materialize");
            size *= t.n_states();
        }
        std::vector<ExtReal> table(size, ExtReal(0.0));
        std::vector<bool> seen(size, false);
        for (auto it = j.at("table").begin(); it != j.at("table").end(); ++it) {
            const Situation s = Situation::from_string(it.key());
            if (static_cast<int>(s.size()) != depth)
                throw parse_error("variable: table key '" + it.key() + "' has the wrong length");
            std::size_t idx = 0;
            for (const std::string& label : s.labels) {
                try {
                    idx = idx * t.n_states() + t.state_index(label);
                } catch (const contract_error& err) {
                    throw parse_error(std::string("variable: ") + err.what());
                }
            }
            table[idx] = detail_extreal_from_json(it.value());
            seen[idx] = true;
        }
        for (std::size_t i = 0; i < size; ++i)
            if (!seen[i]) throw parse_error("variable: table must cover every length-depth word");
        out.finitary = FinitaryVariable::make_dense(depth, t.n_states(), std::move(table));
        return out;
    }

    if (kind == "hit" || kind == "miss" || kind == "hitting_time") {
        if (!j.contains("target")) throw parse_error("variable: " + kind + " kind needs \"target\"");
        std::vector<std::string> target;
        try {
            target = j.at("target").get<std::vector<std::string>>();
        } catch (const json::exception&) {
            throw parse_error("variable: \"target\" must be a list of labels");
        }
        try {
            if (kind == "hit") out.sequence = VariableSequenceSpec::hit(t, target);
            else if (kind == "miss") out.sequence = VariableSequenceSpec::miss(t, target);
            else out.sequence = VariableSequenceSpec::hitting_time(t, target);
        } catch (const contract_error& err) {
            throw parse_error(std::string("variable: ") + err.what());
        }
        return out;
    }

    throw parse_error("variable: unknown kind '" + kind + "'");
}

} // namespace uppex
