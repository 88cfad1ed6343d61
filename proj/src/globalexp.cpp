#include "uppex/globalexp.hpp"

#include <vector>

namespace uppex {

namespace {

// Backward-recursion work horse. Walks the subtree below the conditioning
// situation; structured variables let it stop early on constant subtrees
// and, on stationary/iid trees, reuse values across subtrees whose future
// only depends on (length, last state).
class Evaluator {
public:
    Evaluator(const ImpreciseTree& t, const FinitaryVariable& f, bool lower, std::size_t budget)
        : t_(t), f_(f), lower_(lower), budget_(budget) {
        if (f.n_states() != t.n_states())
            throw contract_error("evaluation: variable and tree disagree on the state count");
        memo_enabled_ = f_.memoizable_by_state() && t_.is_stationary_like();
    }

    ExtReal run(const Situation& s) {
        prefix_.clear();
        labels_ = s;
        for (const std::string& label : s.labels)
            prefix_.push_back(static_cast<int>(t_.state_index(label)));
        if (prefix_.size() >= static_cast<std::size_t>(f_.depth()))
            return f_.at(prefix_);
        return eval();
    }

    std::size_t visited() const { return visited_; }

private:
    ExtReal eval() {
        if (auto c = f_.constant_on(prefix_)) return *c;

        std::size_t key = 0;
        if (memo_enabled_) {
            const std::size_t last =
                prefix_.empty() ? 0 : static_cast<std::size_t>(prefix_.back()) + 1;
            key = prefix_.size() * (t_.n_states() + 1) + last;
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }

        if (++visited_ > budget_)
            throw resource_error("evaluation: situation budget exceeded");

        LocalVariable children;
        children.table.resize(t_.n_states(), ExtReal(0.0));
        for (std::size_t x = 0; x < t_.n_states(); ++x) {
            prefix_.push_back(static_cast<int>(x));
            labels_.labels.push_back(t_.states[x]);
            children[x] = eval();
            labels_.labels.pop_back();
            prefix_.pop_back();
        }

        const LocalModel& m = memo_enabled_
            ? t_.local_model_at(prefix_.empty() ? -1 : prefix_.back())
            : t_.local_model(labels_);
        ExtReal v = lower_ ? lower_exp_local(m, children) : upper_exp_local(m, children);
        if (memo_enabled_) memo_.emplace(key, v);
        return v;
    }

    const ImpreciseTree& t_;
    const FinitaryVariable& f_;
    bool lower_;
    std::size_t budget_;
    bool memo_enabled_ = false;
    std::size_t visited_ = 0;
    std::vector<int> prefix_;
    Situation labels_;
    std::unordered_map<std::size_t, ExtReal> memo_;
};

} // namespace

EvalResult upper_exp_finitary_global(const ImpreciseTree& t, const FinitaryVariable& f,
                                     const Situation& s, std::size_t budget) {
    Evaluator ev(t, f, /*lower=*/false, budget);
    ExtReal v = ev.run(s);
    return EvalResult{v, ev.visited()};
}

EvalResult lower_exp_finitary_global(const ImpreciseTree& t, const FinitaryVariable& f,
                                     const Situation& s, std::size_t budget) {
    Evaluator ev(t, f, /*lower=*/true, budget);
    ExtReal v = ev.run(s);
    return EvalResult{v, ev.visited()};
}

Process conditional_process(const ImpreciseTree& t, const FinitaryVariable& f,
                            int max_depth, std::size_t budget) {
    Process p;
    p.depth = max_depth;
    for (const Situation& s : enumerate_situations(t, max_depth, budget))
        p.set(s, upper_exp_finitary_global(t, f, s, budget).value);
    return p;
}

} // namespace uppex
