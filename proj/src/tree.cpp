#include "uppex/tree.hpp"

#include <sstream>

#include "json_detail.hpp"

namespace uppex {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Situation

std::string Situation::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) out += ',';
        out += labels[i];
    }
    return out;
}

Situation Situation::from_string(const std::string& text) {
    Situation s;
    if (text.empty()) return s;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) s.labels.push_back(part);
    if (!text.empty() && text.back() == ',') s.labels.push_back("");
    return s;
}

// ---------------------------------------------------------------------------
// ImpreciseTree

namespace {

void check_model_states(const LocalModel& m, const std::vector<std::string>& states,
                        const std::string& where) {
    if (m.states != states)
        throw contract_error("tree: local model state list mismatch at " + where);
}

} // namespace

std::size_t ImpreciseTree::state_index(const std::string& label) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == label) return i;
    throw contract_error("tree: unknown state label '" + label + "'");
}

const LocalModel& ImpreciseTree::local_model(const Situation& s) const {
    if (const auto* ex = std::get_if<ExplicitAssignment>(&assignment)) {
        auto it = ex->by_situation.find(s.to_string());
        return it != ex->by_situation.end() ? it->second : ex->fallback;
    }
    if (const auto* st = std::get_if<StationaryAssignment>(&assignment)) {
        if (s.empty()) return st->root;
        auto it = st->by_state.find(s.labels.back());
        if (it == st->by_state.end())
            throw contract_error("tree: no model for state '" + s.labels.back() + "'");
        return it->second;
    }
    return std::get<IidAssignment>(assignment).model;
}

const LocalModel& ImpreciseTree::local_model_at(int last_state_index) const {
    if (const auto* st = std::get_if<StationaryAssignment>(&assignment)) {
        if (last_state_index < 0) return st->root;
        auto it = st->by_state.find(states[static_cast<std::size_t>(last_state_index)]);
        if (it == st->by_state.end())
            throw contract_error("tree: no model for state index " +
                                 std::to_string(last_state_index));
        return it->second;
    }
    if (const auto* iid = std::get_if<IidAssignment>(&assignment)) return iid->model;
    throw contract_error("tree: local_model_at is only defined for stationary/iid trees");
}

ImpreciseTree ImpreciseTree::stationary(std::vector<std::string> states, LocalModel root,
                                        std::map<std::string, LocalModel> by_state) {
    check_model_states(root, states, "root");
    for (const std::string& s : states) {
        auto it = by_state.find(s);
        if (it == by_state.end())
            throw contract_error("tree: stationary assignment missing state '" + s + "'");
        check_model_states(it->second, states, "state '" + s + "'");
    }
    ImpreciseTree t;
    t.states = std::move(states);
    t.assignment = StationaryAssignment{std::move(root), std::move(by_state)};
    return t;
}

ImpreciseTree ImpreciseTree::explicit_map(std::vector<std::string> states,
                                          std::map<std::string, LocalModel> by_situation,
                                          LocalModel fallback) {
    check_model_states(fallback, states, "default");
    for (const auto& [key, m] : by_situation) {
        check_model_states(m, states, "situation '" + key + "'");
        for (const std::string& label : Situation::from_string(key).labels) {
            bool known = false;
            for (const std::string& s : states) known = known || s == label;
            if (!known) throw contract_error("tree: situation key uses unknown label '" + label + "'");
        }
    }
    ImpreciseTree t;
    t.states = std::move(states);
    t.assignment = ExplicitAssignment{std::move(by_situation), std::move(fallback)};
    return t;
}

ImpreciseTree ImpreciseTree::iid(std::vector<std::string> states, LocalModel model) {
    check_model_states(model, states, "iid model");
    ImpreciseTree t;
    t.states = std::move(states);
    t.assignment = IidAssignment{std::move(model)};
    return t;
}

std::vector<Situation> enumerate_situations(const ImpreciseTree& t, int depth,
                                            std::size_t budget) {
    if (depth < 0) throw contract_error("enumerate_situations: negative depth");
    const std::size_t k = t.n_states();
    std::size_t total = 1, level = 1;
    for (int d = 1; d <= depth; ++d) {
        if (level > budget / k) throw resource_error("enumerate_situations: budget exceeded");
        level *= k;
        total += level;
        if (total > budget) throw resource_error("enumerate_situations: budget exceeded");
    }

    std::vector<Situation> out;
    out.reserve(total);
    out.emplace_back();
    std::size_t level_begin = 0;
    for (int d = 1; d <= depth; ++d) {
        const std::size_t level_end = out.size();
        for (std::size_t i = level_begin; i < level_end; ++i)
            for (const std::string& label : t.states)
                out.push_back(out[i].child(label));
        level_begin = level_end;
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON

ImpreciseTree parse_tree(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& err) {
        throw parse_error(std::string("tree: ") + err.what());
    }
    if (!j.is_object() || !j.contains("states") || !j.contains("assignment"))
        throw parse_error("tree: expected {\"states\": [...], \"assignment\": {...}}");

    std::vector<std::string> states;
    try {
        states = j.at("states").get<std::vector<std::string>>();
    } catch (const json::exception&) {
        throw parse_error("tree: \"states\" must be a list of labels");
    }

    const json& a = j.at("assignment");
    if (!a.is_object() || !a.contains("kind"))
        throw parse_error("tree: assignment needs a \"kind\"");
    const std::string kind = a.at("kind").get<std::string>();

    try {
        if (kind == "stationary") {
            if (!a.contains("root") || !a.contains("by_state"))
                throw parse_error("tree: stationary assignment needs \"root\" and \"by_state\"");
            std::map<std::string, LocalModel> by_state;
            for (auto it = a.at("by_state").begin(); it != a.at("by_state").end(); ++it)
                by_state.emplace(it.key(), detail_local_model_from_json(it.value()));
            return ImpreciseTree::stationary(states, detail_local_model_from_json(a.at("root")),
                                             std::move(by_state));
        }
        if (kind == "explicit") {
            if (!a.contains("by_situation") || !a.contains("default"))
                throw parse_error("tree: explicit assignment needs \"by_situation\" and \"default\"");
            std::map<std::string, LocalModel> by_situation;
            for (auto it = a.at("by_situation").begin(); it != a.at("by_situation").end(); ++it)
                by_situation.emplace(it.key(), detail_local_model_from_json(it.value()));
            return ImpreciseTree::explicit_map(states, std::move(by_situation),
                                               detail_local_model_from_json(a.at("default")));
        }
        if (kind == "iid") {
            if (!a.contains("model")) throw parse_error("tree: iid assignment needs \"model\"");
            return ImpreciseTree::iid(states, detail_local_model_from_json(a.at("model")));
        }
    } catch (const contract_error& err) {
        throw parse_error(std::string("tree: ") + err.what());
    }
    throw parse_error("tree: unknown assignment kind '" + kind + "'");
}

std::string tree_to_json(const ImpreciseTree& t) {
    json a;
    if (const auto* st = std::get_if<StationaryAssignment>(&t.assignment)) {
        a["kind"] = "stationary";
        a["root"] = detail_local_model_as_json(st->root);
        json by_state = json::object();
        for (const auto& [label, m] : st->by_state) by_state[label] = detail_local_model_as_json(m);
        a["by_state"] = by_state;
    } else if (const auto* ex = std::get_if<ExplicitAssignment>(&t.assignment)) {
        a["kind"] = "explicit";
        json by_situation = json::object();
        for (const auto& [key, m] : ex->by_situation)
            by_situation[key] = detail_local_model_as_json(m);
        a["by_situation"] = by_situation;
        a["default"] = detail_local_model_as_json(ex->fallback);
    } else {
        a["kind"] = "iid";
        a["model"] = detail_local_model_as_json(std::get<IidAssignment>(t.assignment).model);
    }
    return json{{"states", t.states}, {"assignment", a}}.dump();
}

} // namespace uppex
