#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "uppex/localmodel.hpp"

namespace uppex {

// A situation is a finite history of state labels; the empty history is the
// root. Serialized form is the comma-joined label list ("" for the root),
// which is why labels may not contain commas.
struct Situation {
    std::vector<std::string> labels;

    Situation() = default;
    explicit Situation(std::vector<std::string> ls) : labels(std::move(ls)) {}

    std::size_t size() const { return labels.size(); }
    bool empty() const { return labels.empty(); }

    Situation child(const std::string& label) const {
        Situation s = *this;
        s.labels.push_back(label);
        return s;
    }

    std::string to_string() const;
    static Situation from_string(const std::string& text);

    bool operator==(const Situation& o) const { return labels == o.labels; }
};

// Assignment of a local model to every situation, in one of three shapes.

// Keyed by the last state of the situation; `root` covers the empty history.
struct StationaryAssignment {
    LocalModel root;
    std::map<std::string, LocalModel> by_state;
};

// Explicit per-situation table (keyed by serialized situation) with a
// fallback for everything not listed.
struct ExplicitAssignment {
    std::map<std::string, LocalModel> by_situation;
    LocalModel fallback;
};

// One model everywhere.
struct IidAssignment {
    LocalModel model;
};

struct ImpreciseTree {
    std::vector<std::string> states;
    std::variant<StationaryAssignment, ExplicitAssignment, IidAssignment> assignment;

    std::size_t n_states() const { return states.size(); }
    bool is_stationary_like() const { return !std::holds_alternative<ExplicitAssignment>(assignment); }

    // Index of a label in `states`; throws contract_error on unknown labels.
    std::size_t state_index(const std::string& label) const;

    // The local model governing the step out of situation s.
    const LocalModel& local_model(const Situation& s) const;
    // Same thing keyed by depth + last state index (-1 for the root); valid
    // for stationary and iid assignments, which is what the hot path uses.
    const LocalModel& local_model_at(int last_state_index) const;

    static ImpreciseTree stationary(std::vector<std::string> states, LocalModel root,
                                    std::map<std::string, LocalModel> by_state);
    static ImpreciseTree explicit_map(std::vector<std::string> states,
                                      std::map<std::string, LocalModel> by_situation,
                                      LocalModel fallback);
    static ImpreciseTree iid(std::vector<std::string> states, LocalModel model);
};

// All situations of length <= depth, level by level, lexicographic in state
// order within a level. Throws resource_error when the total count would
// exceed `budget`.
std::vector<Situation> enumerate_situations(const ImpreciseTree& t, int depth,
                                            std::size_t budget = 1000000);

// JSON documents:
//   {"states": [...],
//    "assignment": {"kind": "stationary", "root": {...}, "by_state": {...}}}
//   {"states": [...],
//    "assignment": {"kind": "explicit", "by_situation": {"a,b": {...}}, "default": {...}}}
//   {"states": [...], "assignment": {"kind": "iid", "model": {...}}}
ImpreciseTree parse_tree(const std::string& json_text);
std::string tree_to_json(const ImpreciseTree& t);

} // namespace uppex
