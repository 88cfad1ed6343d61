#include "uppex/approx.hpp"

#include <cmath>

namespace uppex {

namespace {

// Internal consistency failures (a trace that is supposed to be monotone
// moving the wrong way, a cut limit missing its direct value) are bugs, not
// user errors; they still surface as exceptions so nothing silently lies.
[[noreturn]] void consistency_failure(const std::string& what) {
    throw contract_error("internal consistency: " + what);
}

} // namespace

ApproxResult monotone_limit(const ImpreciseTree& t, const VariableSequenceSpec& spec,
                            const Situation& s, Direction direction,
                            const ApproxOptions& opts) {
    ApproxResult out;
    out.direction = direction;

    const std::size_t seq_len = spec.length();
    const int last_n = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(opts.max_n), seq_len));

    double prev = 0.0;
    bool have_prev = false;
    int stable = 0;
    for (int n = 1; n <= last_n; ++n) {
        FinitaryVariable f = generate_term(spec, n);
        EvalResult r = opts.use_lower ? lower_exp_finitary_global(t, f, s, opts.budget)
                                      : upper_exp_finitary_global(t, f, s, opts.budget);
        if (!r.value.is_finite()) {
            // An infinite term value settles the limit outright.
            out.estimate = r.value;
            out.divergence_flag = true;
            return out;
        }
        const double v = r.value.finite();
        out.trace.emplace_back(n, v);
        if (have_prev) {
            if (direction == Direction::up && v < prev - 1e-9)
                consistency_failure("trace is not non-decreasing");
            if (direction == Direction::down && v > prev + 1e-9)
                consistency_failure("trace is not non-increasing");
            stable = std::fabs(v - prev) < opts.tol ? stable + 1 : 0;
            if (stable >= opts.k_stable) {
                out.converged = true;
                out.estimate = ExtReal(v);
                return out;
            }
            // Divergence heuristic: far beyond any plausible value and still
            // moving by a real amount every step.
            const double gain = direction == Direction::up ? v - prev : prev - v;
            if (std::fabs(v) > opts.ceiling && gain >= opts.min_increment) {
                out.divergence_flag = true;
                out.estimate = direction == Direction::up ? ExtReal::pos_inf()
                                                          : ExtReal::neg_inf();
                return out;
            }
        }
        prev = v;
        have_prev = true;
    }

    if (!have_prev) consistency_failure("empty trace");
    out.estimate = ExtReal(prev);
    out.bracket = std::make_pair(prev, direction);
    return out;
}

ApproxResult upper_hitting_probability(const ImpreciseTree& t,
                                       const std::vector<std::string>& target,
                                       const Situation& s, const ApproxOptions& opts) {
    VariableSequenceSpec spec =
        VariableSequenceSpec::hit(t, target, static_cast<int>(s.size()));
    return monotone_limit(t, spec, s, Direction::up, opts);
}

ApproxResult lower_hitting_probability(const ImpreciseTree& t,
                                       const std::vector<std::string>& target,
                                       const Situation& s, const ApproxOptions& opts) {
    // Conjugacy through the complement: at every horizon n the window-n hit
    // indicator is 1 minus the window-n miss indicator, so the lower hitting
    // probability is exactly 1 - (upper probability of missing throughout).
    VariableSequenceSpec spec =
        VariableSequenceSpec::miss(t, target, static_cast<int>(s.size()));
    ApproxResult miss = monotone_limit(t, spec, s, Direction::down, opts);

    ApproxResult out;
    out.direction = Direction::up;
    out.converged = miss.converged;
    out.divergence_flag = miss.divergence_flag;
    for (const auto& [n, v] : miss.trace) out.trace.emplace_back(n, 1.0 - v);
    out.estimate = miss.estimate.is_finite() ? ExtReal(1.0 - miss.estimate.finite())
                                             : -miss.estimate;
    if (miss.bracket)
        out.bracket = std::make_pair(1.0 - miss.bracket->first, Direction::up);
    return out;
}

ApproxResult upper_expected_hitting_time(const ImpreciseTree& t,
                                         const std::vector<std::string>& target,
                                         const Situation& s, const ApproxOptions& opts) {
    VariableSequenceSpec spec =
        VariableSequenceSpec::hitting_time(t, target, static_cast<int>(s.size()));
    return monotone_limit(t, spec, s, Direction::up, opts);
}

ApproxResult lower_expected_hitting_time(const ImpreciseTree& t,
                                         const std::vector<std::string>& target,
                                         const Situation& s, const ApproxOptions& opts) {
    VariableSequenceSpec spec =
        VariableSequenceSpec::hitting_time(t, target, static_cast<int>(s.size()));
    ApproxOptions lower_opts = opts;
    lower_opts.use_lower = true;
    // Truncated hitting times grow with the horizon, so the lower values
    // climb as well.
    return monotone_limit(t, spec, s, Direction::up, lower_opts);
}

ApproxResult lower_cut_global_limit(const ImpreciseTree& t, const FinitaryVariable& f,
                                    const Situation& s, const std::vector<double>& schedule,
                                    const ApproxOptions& opts) {
    if (schedule.empty()) throw contract_error("lower_cut_global_limit: empty schedule");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (!(schedule[i] < schedule[i - 1]))
            throw contract_error("lower_cut_global_limit: schedule must be strictly decreasing");

    ApproxResult out;
    out.direction = Direction::down;
    double prev = 0.0;
    bool have_prev = false;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        ExtReal v = upper_exp_finitary_global(t, f.cut_below(schedule[i], opts.budget), s,
                                              opts.budget).value;
        if (v.is_pos_inf()) {
            out.estimate = v;
            out.divergence_flag = true;
            return out;
        }
        const double x = v.finite();
        if (have_prev && x > prev + 1e-9)
            consistency_failure("lower-cut trace is not non-increasing");
        out.trace.emplace_back(static_cast<int>(i + 1), x);
        prev = x;
        have_prev = true;
    }

    ExtReal direct = upper_exp_finitary_global(t, f, s, opts.budget).value;
    out.estimate = direct;
    if (direct.is_finite()) {
        if (std::fabs(prev - direct.finite()) > opts.tol)
            consistency_failure("lower-cut limit does not match the direct value");
        out.converged = true;
    } else if (direct.is_neg_inf()) {
        // The cut values must be running away downwards.
        out.divergence_flag = true;
        if (prev > -opts.ceiling)
            out.bracket = std::make_pair(prev, Direction::down);
        else
            out.converged = true;
    } else {
        consistency_failure("direct value is +inf but every cut evaluated finite");
    }
    return out;
}

} // namespace uppex
