#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uppex/extreal.hpp"
#include "uppex/tree.hpp"

namespace uppex {

// A variable that only depends on the first `depth` states of a path.
//
// Two representations share this type:
//  * dense: an explicit table over all length-`depth` state words, indexed
//    mixed-radix with the first state most significant;
//  * structured: hit / miss / truncated-hitting-time variables given by a
//    target state set and a scan offset. These evaluate lazily, and they can
//    report that they are constant on a whole subtree, which is what lets
//    deep-horizon evaluation prune and memoize instead of materializing
//    |states|^depth tables.
class FinitaryVariable {
public:
    enum class Kind { dense, hit, miss, hitting_time };

    static FinitaryVariable make_dense(int depth, std::size_t n_states,
                                       std::vector<ExtReal> table);
    static FinitaryVariable make_constant(ExtReal c, std::size_t n_states);

    // Structured kinds scan positions offset..depth-1 of the path for a
    // target state (positions before `offset` are ignored, so a conditional
    // evaluation at a situation of length `offset` only looks at states
    // strictly after it):
    //  * hit:           1 if some scanned state is in the target, else 0
    //  * miss:          1 - hit
    //  * hitting_time:  i - offset for the first scanned hit at position i
    //                   (1-based within the scan window), and
    //                   depth - offset + 1 when there is no hit
    static FinitaryVariable make_hit(int depth, std::size_t n_states,
                                     std::vector<char> target_mask, int offset = 0);
    static FinitaryVariable make_miss(int depth, std::size_t n_states,
                                      std::vector<char> target_mask, int offset = 0);
    static FinitaryVariable make_hitting_time(int depth, std::size_t n_states,
                                              std::vector<char> target_mask, int offset = 0);

    Kind kind() const { return kind_; }
    int depth() const { return depth_; }
    std::size_t n_states() const { return n_states_; }
    const std::vector<ExtReal>& table() const { return table_; }

    bool bounded_below() const;
    bool bounded_above() const;
    bool is_gamble() const { return bounded_below() && bounded_above(); }
    ExtReal min_value() const;
    ExtReal max_value() const;

    // Value on a path prefix of length >= depth (extra states are ignored).
    ExtReal at(std::span<const int> prefix) const;

    // If the variable is constant on the whole subtree below `prefix`
    // (|prefix| <= depth), that constant; otherwise nullopt. Always answers
    // the value itself when |prefix| == depth.
    std::optional<ExtReal> constant_on(std::span<const int> prefix) const;

    // True when the subtree value below a prefix depends only on the prefix
    // length and its last state (given the prefix is not constant-valued).
    // Holds for the structured kinds and enables state-space memoization.
    bool memoizable_by_state() const { return kind_ != Kind::dense; }

    // Dense copy of this variable; size-guarded by `budget` table entries.
    FinitaryVariable to_dense(std::size_t budget = 1000000) const;

    // Pointwise cuts (dense representation; structured inputs are densified).
    FinitaryVariable cut_below(double c, std::size_t budget = 1000000) const;
    FinitaryVariable cut_above(double c, std::size_t budget = 1000000) const;
    FinitaryVariable negated(std::size_t budget = 1000000) const;

    // Mixed-radix index of a length-`depth` word, first state most significant.
    std::size_t dense_index(std::span<const int> word) const;

private:
    Kind kind_ = Kind::dense;
    int depth_ = 0;
    std::size_t n_states_ = 1;
    std::vector<ExtReal> table_;   // dense only
    std::vector<char> target_;     // structured only: membership by state index
    int offset_ = 0;               // structured only: first scanned position
};

// Recipe for the n-th member of a variable sequence, used by the monotone
// approximation loops.
struct VariableSequenceSpec {
    enum class Kind { user_list, hit, miss, hitting_time, lower_cut_family } kind;

    // user_list
    std::vector<FinitaryVariable> terms;

    // hit / miss / hitting_time
    std::vector<char> target_mask;
    std::size_t n_states = 0;
    int offset = 0; // scan starts after a length-`offset` history

    // lower_cut_family: cuts of a fixed variable along a schedule
    std::optional<FinitaryVariable> base;
    std::vector<double> cut_schedule;

    static VariableSequenceSpec user_list(std::vector<FinitaryVariable> terms);
    static VariableSequenceSpec hit(const ImpreciseTree& t,
                                    const std::vector<std::string>& target, int offset = 0);
    static VariableSequenceSpec miss(const ImpreciseTree& t,
                                     const std::vector<std::string>& target, int offset = 0);
    static VariableSequenceSpec hitting_time(const ImpreciseTree& t,
                                             const std::vector<std::string>& target,
                                             int offset = 0);
    static VariableSequenceSpec lower_cut_family(FinitaryVariable base,
                                                 std::vector<double> schedule);

    std::size_t length() const; // number of terms (SIZE_MAX when unbounded)
};

// n-th term of the sequence, n >= 1. For hit kinds this is the window-n
// variable of depth offset + n; for user lists, terms[n-1]; for cut
// families, the base cut below schedule[n-1].
FinitaryVariable generate_term(const VariableSequenceSpec& spec, int n);

// Measurability padding: returns a sequence g_1, g_2, ... where the n-th
// element depends on at most the first n states, built by holding each input
// term back (repeating the previous output, starting from the constant c)
// until its depth fits. Consumes the whole input list.
std::vector<FinitaryVariable> pad_to_n_measurable(const std::vector<FinitaryVariable>& seq,
                                                  ExtReal c, std::size_t n_states);

// Variable documents:
//   {"kind":"finitary","depth":2,"table":{"a,b":1.5,"b,b":"inf", ...}}
//   {"kind":"hit","target":["a"]}   (likewise "miss", "hitting_time")
// The first form yields a single dense variable; the others a sequence spec.
struct ParsedVariable {
    std::optional<FinitaryVariable> finitary;
    std::optional<VariableSequenceSpec> sequence;
};
ParsedVariable parse_variable(const std::string& json_text, const ImpreciseTree& t);

std::vector<char> target_mask_from_labels(const ImpreciseTree& t,
                                          const std::vector<std::string>& target);

} // namespace uppex
