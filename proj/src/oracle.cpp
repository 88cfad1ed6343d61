#include "uppex/oracle.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace uppex {

// ---------------------------------------------------------------------------
// CounterRng

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t CounterRng::next_u64() {
    // Counter mode: output i depends only on (seed, i).
    return splitmix64(seed_ ^ splitmix64(counter_++));
}

double CounterRng::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int CounterRng::next_below(int n) {
    if (n <= 0) throw contract_error("CounterRng: next_below needs n > 0");
    return static_cast<int>(next_unit() * n) % n;
}

double CounterRng::next_in(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
}

// ---------------------------------------------------------------------------
// Brute-force envelopes

namespace {

// Interior situations in BFS order, as state-index words, together with the
// vertex list of the model at each.
struct Layout {
    std::vector<std::vector<int>> interior; // words of length < depth
    std::vector<const LocalModel*> models;
    std::size_t selections = 1;
};

Layout build_layout(const ImpreciseTree& t, const FinitaryVariable& f, std::size_t budget) {
    if (f.n_states() != t.n_states())
        throw contract_error("oracle: variable and tree disagree on the state count");
    if (!f.is_gamble())
        throw contract_error("oracle: brute force handles real-valued variables only");

    Layout layout;
    layout.interior.push_back({});
    std::size_t level_begin = 0;
    for (int d = 1; d < f.depth(); ++d) {
        const std::size_t level_end = layout.interior.size();
        for (std::size_t i = level_begin; i < level_end; ++i)
            for (std::size_t x = 0; x < t.n_states(); ++x) {
                std::vector<int> w = layout.interior[i];
                w.push_back(static_cast<int>(x));
                layout.interior.push_back(std::move(w));
            }
        level_begin = level_end;
    }

    for (const std::vector<int>& w : layout.interior) {
        Situation s;
        for (int x : w) s.labels.push_back(t.states[static_cast<std::size_t>(x)]);
        const LocalModel& m = t.local_model(s);
        layout.models.push_back(&m);
        if (layout.selections > budget / m.vertices.size())
            throw resource_error("oracle: selection budget exceeded");
        layout.selections *= m.vertices.size();
    }
    return layout;
}

// Ordinary expectation of f under one precise selection (vertex index per
// interior situation, in the layout's BFS order).
double precise_expectation(const Layout& layout, const ImpreciseTree& t,
                           const FinitaryVariable& f, const std::vector<std::size_t>& pick) {
    std::vector<int> word;
    std::function<double(std::size_t, int)> rec; // (interior index, level)

    // The BFS layout places each level contiguously, so child x of the i-th
    // node within level d is the (i * n_states + x)-th node of level d + 1.
    std::vector<std::size_t> level_offset;
    {
        std::size_t off = 0, count = 1;
        for (int d = 0; d < f.depth(); ++d) {
            level_offset.push_back(off);
            off += count;
            count *= t.n_states();
        }
    }

    rec = [&](std::size_t idx, int level) -> double {
        const std::vector<double>& p = layout.models[idx]->vertices[pick[idx]];
        const std::size_t pos_in_level = idx - level_offset[static_cast<std::size_t>(level)];
        double acc = 0.0;
        for (std::size_t x = 0; x < t.n_states(); ++x) {
            if (p[x] == 0.0) continue;
            word.push_back(static_cast<int>(x));
            double v;
            if (level + 1 == f.depth()) {
                v = f.at(word).finite();
            } else {
                const std::size_t child =
                    level_offset[static_cast<std::size_t>(level + 1)] +
                    pos_in_level * t.n_states() + x;
                v = rec(child, level + 1);
            }
            acc += p[x] * v;
            word.pop_back();
        }
        return acc;
    };

    if (f.depth() == 0) return f.at(std::vector<int>{}).finite();
    return rec(0, 0);
}

OracleResult brute_force(const ImpreciseTree& t, const FinitaryVariable& f,
                         std::size_t budget, bool lower) {
    if (f.depth() == 0) {
        std::vector<int> empty;
        return OracleResult{f.at(empty).finite(), 1};
    }
    Layout layout = build_layout(t, f, budget);
    std::vector<std::size_t> pick(layout.interior.size(), 0);
    OracleResult out;
    out.selections = layout.selections;
    bool first = true;
    while (true) {
        double v = precise_expectation(layout, t, f, pick);
        if (first || (lower ? v < out.value : v > out.value)) out.value = v;
        first = false;
        // Odometer step over the vertex choices.
        std::size_t i = 0;
        for (; i < pick.size(); ++i) {
            if (++pick[i] < layout.models[i]->vertices.size()) break;
            pick[i] = 0;
        }
        if (i == pick.size()) break;
    }
    return out;
}

} // namespace

OracleResult brute_force_upper_exp(const ImpreciseTree& t, const FinitaryVariable& f,
                                   std::size_t budget) {
    return brute_force(t, f, budget, /*lower=*/false);
}

OracleResult brute_force_lower_exp(const ImpreciseTree& t, const FinitaryVariable& f,
                                   std::size_t budget) {
    return brute_force(t, f, budget, /*lower=*/true);
}

LocalModel random_local_model(CounterRng& rng, std::size_t n_states,
                              std::size_t max_vertices) {
    std::vector<std::string> states;
    for (std::size_t i = 0; i < n_states; ++i) states.push_back("s" + std::to_string(i));
    const std::size_t n_vertices = 1 + static_cast<std::size_t>(
        rng.next_below(static_cast<int>(max_vertices)));
    std::vector<std::vector<double>> vertices;
    for (std::size_t v = 0; v < n_vertices; ++v) {
        std::vector<double> p(n_states);
        double sum = 0.0;
        for (double& x : p) {
            x = 0.05 + rng.next_unit(); // keep masses away from 0 a bit
            sum += x;
        }
        for (double& x : p) x /= sum;
        // Renormalize the largest entry so the sum is exactly 1 in floating
        // point; the validator demands 1e-9 agreement.
        double drift = 1.0;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) drift -= p[i];
        p.back() = drift;
        vertices.push_back(std::move(p));
    }
    return make_local_model(std::move(states), std::move(vertices));
}

FinitaryVariable random_dense_gamble(CounterRng& rng, std::size_t n_states, int depth,
                                     double lo, double hi) {
    std::size_t size = 1;
    for (int i = 0; i < depth; ++i) size *= n_states;
    std::vector<ExtReal> table;
    table.reserve(size);
    for (std::size_t i = 0; i < size; ++i) table.push_back(ExtReal(rng.next_in(lo, hi)));
    return FinitaryVariable::make_dense(depth, n_states, std::move(table));
}

RandomInstance sample_random_instance(CounterRng& rng, const InstanceOptions& opts) {
    const std::size_t k = opts.min_states + static_cast<std::size_t>(rng.next_below(
        static_cast<int>(opts.max_states - opts.min_states + 1)));
    const int depth = 1 + rng.next_below(opts.max_depth);
    std::vector<std::string> states;
    for (std::size_t i = 0; i < k; ++i) states.push_back("s" + std::to_string(i));

    const int shape = opts.stationary_only ? 0 : rng.next_below(3);
    std::size_t max_vertices = opts.max_vertices;
    for (int attempt = 0;; ++attempt) {
        ImpreciseTree tree;
        if (shape == 0) {
            std::map<std::string, LocalModel> by_state;
            for (const std::string& s : states)
                by_state.emplace(s, random_local_model(rng, k, max_vertices));
            tree = ImpreciseTree::stationary(states, random_local_model(rng, k, max_vertices),
                                             std::move(by_state));
        } else if (shape == 1) {
            tree = ImpreciseTree::iid(states, random_local_model(rng, k, max_vertices));
        } else {
            std::map<std::string, LocalModel> by_situation;
            // A handful of explicit overrides at depth 1.
            for (const std::string& s : states)
                if (rng.next_unit() < 0.5)
                    by_situation.emplace(s, random_local_model(rng, k, max_vertices));
            tree = ImpreciseTree::explicit_map(states, std::move(by_situation),
                                               random_local_model(rng, k, max_vertices));
        }

        // Selection count = product of vertex counts over interior situations.
        std::size_t selections = 1;
        bool ok = true;
        std::vector<Situation> frontier{Situation{}};
        for (int d = 0; d < depth && ok; ++d) {
            std::vector<Situation> next;
            for (const Situation& s : frontier) {
                const std::size_t nv = tree.local_model(s).vertices.size();
                if (selections > opts.selection_cap / nv) { ok = false; break; }
                selections *= nv;
                if (d + 1 < depth)
                    for (const std::string& label : states) next.push_back(s.child(label));
            }
            frontier = std::move(next);
        }
        if (ok) {
            RandomInstance inst{std::move(tree),
                                random_dense_gamble(rng, k, depth, opts.lo, opts.hi)};
            return inst;
        }
        if (attempt % 4 == 3 && max_vertices > 1) --max_vertices;
    }
}

double sample_paths_mean(const ImpreciseTree& t, const FinitaryVariable& f,
                         std::size_t selection_index, int n_paths, std::uint64_t seed) {
    if (n_paths <= 0) throw contract_error("sample_paths_mean: need n_paths > 0");
    Layout layout = build_layout(t, f, 1000000);
    if (selection_index >= layout.selections)
        throw contract_error("sample_paths_mean: selection index out of range");
    std::vector<std::size_t> pick(layout.interior.size(), 0);
    std::size_t rest = selection_index;
    for (std::size_t i = 0; i < pick.size(); ++i) {
        const std::size_t k = layout.models[i]->vertices.size();
        pick[i] = rest % k;
        rest /= k;
    }

    std::vector<std::size_t> level_offset;
    {
        std::size_t off = 0, count = 1;
        for (int d = 0; d < f.depth(); ++d) {
            level_offset.push_back(off);
            off += count;
            count *= t.n_states();
        }
    }

    CounterRng rng(seed);
    double total = 0.0;
    std::vector<int> word;
    for (int path = 0; path < n_paths; ++path) {
        word.clear();
        std::size_t idx = 0;
        for (int level = 0; level < f.depth(); ++level) {
            const std::vector<double>& p = layout.models[idx]->vertices[pick[idx]];
            const double u = rng.next_unit();
            double cum = 0.0;
            std::size_t chosen = t.n_states() - 1;
            for (std::size_t x = 0; x < t.n_states(); ++x) {
                cum += p[x];
                if (u < cum) { chosen = x; break; }
            }
            word.push_back(static_cast<int>(chosen));
            if (level + 1 < f.depth()) {
                const std::size_t pos = idx - level_offset[static_cast<std::size_t>(level)];
                idx = level_offset[static_cast<std::size_t>(level + 1)] +
                      pos * t.n_states() + chosen;
            }
        }
        total += f.at(word).finite();
    }
    return total / n_paths;
}

} // namespace uppex
