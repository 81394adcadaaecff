#include "sizeclust/optimize.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "sizeclust/composition.hpp"
#include "sizeclust/errors.hpp"
#include "sizeclust/random.hpp"

namespace sizeclust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kImprovement = 1e-12;

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

void check_draws(std::span<const Assignment> draws, const LossSpec& spec) {
    spec.validate();
    if (draws.empty()) throw DomainError("optimizer: no posterior draws");
    const std::size_t n = draws.front().size();
    for (const auto& z : draws) {
        if (z.size() != n) throw DomainError("optimizer: draws have different lengths");
        validate_assignment(z, spec.k, "draw");
    }
}

}  // namespace

void OptimizerConfig::validate() const {
    if (population_size < 2) throw ConfigError("optimizer: population_size must be >= 2");
    if (max_generations < 1) throw ConfigError("optimizer: max_generations must be >= 1");
    if (wait_generations < 1) throw ConfigError("optimizer: wait_generations must be >= 1");
    if (!(mutation_rate > 0.0 && mutation_rate < 1.0)) throw ConfigError("optimizer: mutation_rate must be in (0,1)");
    if (!(crossover_rate > 0.0 && crossover_rate < 1.0))
        throw ConfigError("optimizer: crossover_rate must be in (0,1)");
    if (tournament_size < 1) throw ConfigError("optimizer: tournament_size must be >= 1");
}

// ---------------------------------------------------------------------------
// ExpectedLossEvaluator

ExpectedLossEvaluator::ExpectedLossEvaluator(std::span<const Assignment> draws, LossSpec spec)
    : spec_(std::move(spec)) {
    check_draws(draws, spec_);
    n_ = static_cast<int>(draws.front().size());
    ka_ = spec_.target_labels();
    kz_ = spec_.k;
    t_ = draws.size();
    words_ = (sz(n_) + 63) / 64;
    masks_.assign(t_ * sz(kz_) * words_, 0);

    xlogx_.resize(sz(n_) + 1);
    xlogx_[0] = 0.0;
    for (int c = 1; c <= n_; ++c) xlogx_[sz(c)] = c * std::log2(static_cast<double>(c));

    std::vector<int> sizes(sz(kz_));
    double draw_term = 0.0;
    for (std::size_t t = 0; t < t_; ++t) {
        std::fill(sizes.begin(), sizes.end(), 0);
        std::uint64_t* base = masks_.data() + t * sz(kz_) * words_;
        for (int i = 0; i < n_; ++i) {
            const int h = draws[t][sz(i)] - 1;
            base[sz(h) * words_ + sz(i) / 64] |= std::uint64_t{1} << (i % 64);
            ++sizes[sz(h)];
        }
        double term = 0.0;
        for (int m : sizes) term += xlogx_[sz(m)];
        draw_term += term;
    }
    mean_draw_term_ = draw_term / static_cast<double>(t_);

    eta_clr_sorted_ = clr(spec_.eta);
    std::sort(eta_clr_sorted_.begin(), eta_clr_sorted_.end());
}

double ExpectedLossEvaluator::expected_vi(std::span<const Label> a) const {
    if (a.size() != sz(n_)) throw DomainError("evaluator: action length does not match the draws");
    std::vector<std::uint64_t> groups(sz(ka_) * words_, 0);
    std::vector<int> sizes(sz(ka_), 0);
    for (int i = 0; i < n_; ++i) {
        const int g = a[sz(i)] - 1;
        if (g < 0 || g >= ka_) throw DomainError("evaluator: action label outside 1..K_target");
        groups[sz(g) * words_ + sz(i) / 64] |= std::uint64_t{1} << (i % 64);
        ++sizes[sz(g)];
    }
    std::vector<int> occupied;
    double action_term = 0.0;
    for (int g = 0; g < ka_; ++g) {
        if (sizes[sz(g)] == 0) continue;
        occupied.push_back(g);
        action_term += xlogx_[sz(sizes[sz(g)])];
    }

    double joint = 0.0;
    const std::size_t kz = sz(kz_);
    if (words_ == 1) {
        // N <= 64: one word per group; the last draw label's count follows
        // from the group size
        std::vector<std::uint64_t> group_masks;
        std::vector<int> group_sizes;
        for (int g : occupied) {
            group_masks.push_back(groups[sz(g)]);
            group_sizes.push_back(sizes[sz(g)]);
        }
        const std::size_t occ = group_masks.size();
        const double* table = xlogx_.data();
        for (std::size_t t = 0; t < t_; ++t) {
            const std::uint64_t* draw = masks_.data() + t * kz;
            double term = 0.0;
            for (std::size_t g = 0; g < occ; ++g) {
                const std::uint64_t m = group_masks[g];
                int rest = group_sizes[g];
                for (std::size_t h = 0; h + 1 < kz; ++h) {
                    const int c = std::popcount(m & draw[h]);
                    rest -= c;
                    term += table[c];
                }
                term += table[rest];
            }
            joint += term;
        }
        joint /= static_cast<double>(t_);
        const double vi = (action_term + mean_draw_term_ - 2.0 * joint) / static_cast<double>(n_);
        return std::max(0.0, vi);
    }
    for (std::size_t t = 0; t < t_; ++t) {
        const std::uint64_t* draw = masks_.data() + t * kz * words_;
        double term = 0.0;
        for (int g : occupied) {
            const std::uint64_t* group = groups.data() + sz(g) * words_;
            for (std::size_t h = 0; h < kz; ++h) {
                const std::uint64_t* dh = draw + h * words_;
                int c = 0;
                for (std::size_t w = 0; w < words_; ++w) c += std::popcount(group[w] & dh[w]);
                term += xlogx_[sz(c)];
            }
        }
        joint += term;
    }
    joint /= static_cast<double>(t_);
    const double vi = (action_term + mean_draw_term_ - 2.0 * joint) / static_cast<double>(n_);
    return std::max(0.0, vi);
}

double ExpectedLossEvaluator::size_term_from_counts(std::span<const int> counts) const {
    const double denom = static_cast<double>(n_) * (1.0 + spec_.delta);
    std::vector<double> c(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        c[i] = (counts[i] + spec_.delta) / denom;
        if (!(c[i] > 0.0)) return kInf;
    }
    if (spec_.mode == LossMode::sensitive) return aitchison_distance(spec_.eta, c);
    auto cc = clr(c);
    std::sort(cc.begin(), cc.end());
    double ss = 0.0;
    for (std::size_t i = 0; i < cc.size(); ++i) {
        const double d = eta_clr_sorted_[i] - cc[i];
        ss += d * d;
    }
    return std::sqrt(ss);
}

double ExpectedLossEvaluator::size_term(std::span<const Label> a) const {
    std::vector<int> counts(sz(ka_), 0);
    for (Label l : a) {
        if (l < 1 || l > ka_) throw DomainError("evaluator: action label outside 1..K_target");
        ++counts[sz(l - 1)];
    }
    return size_term_from_counts(counts);
}

double ExpectedLossEvaluator::operator()(std::span<const Label> a) const {
    const double vi = expected_vi(a);
    if (spec_.lambda == 0.0) return vi;
    const double size = size_term(a);
    if (size == kInf) return kInf;
    return vi + spec_.lambda * size;
}

// ---------------------------------------------------------------------------
// Local search

Assignment local_search(std::span<const Label> start, const ExpectedLossEvaluator& objective) {
    Assignment current(start.begin(), start.end());
    double value = objective(current);
    const int ka = objective.action_labels();
    for (;;) {
        double best_value = value;
        int best_n = -1;
        Label best_label = 0;
        for (std::size_t n = 0; n < current.size(); ++n) {
            const Label original = current[n];
            for (Label l = 1; l <= ka; ++l) {
                if (l == original) continue;
                current[n] = l;
                const double v = objective(current);
                if (v < best_value - kImprovement) {
                    best_value = v;
                    best_n = static_cast<int>(n);
                    best_label = l;
                }
            }
            current[n] = original;
        }
        if (best_n < 0) break;
        current[sz(best_n)] = best_label;
        value = best_value;
    }
    return current;
}

Assignment local_search(std::span<const Label> start, std::span<const Assignment> draws, const LossSpec& spec) {
    validate_assignment(start, spec.target_labels(), "start");
    const ExpectedLossEvaluator objective(draws, spec);
    return local_search(start, objective);
}

// ---------------------------------------------------------------------------
// Genetic algorithm

namespace {

std::string key_of(const Assignment& a) {
    std::string key(a.size(), '\0');
    for (std::size_t i = 0; i < a.size(); ++i) key[i] = static_cast<char>(a[i]);
    return key;
}

class MemoObjective {
public:
    explicit MemoObjective(const ExpectedLossEvaluator& f) : f_(f) {}

    double operator()(const Assignment& a) {
        auto [it, inserted] = cache_.try_emplace(key_of(a), 0.0);
        if (inserted) it->second = f_(a);
        return it->second;
    }

    std::size_t size() const { return cache_.size(); }

private:
    const ExpectedLossEvaluator& f_;
    std::unordered_map<std::string, double> cache_;
};

}  // namespace

OptimizationResult optimize_assignment(std::span<const Assignment> draws, const LossSpec& spec,
                                       const OptimizerConfig& cfg) {
    cfg.validate();
    const ExpectedLossEvaluator objective(draws, spec);
    MemoObjective memo(objective);
    Rng rng(cfg.seed);

    const int n = objective.respondents();
    const int ka = objective.action_labels();
    const bool canonical = spec.label_invariant();
    std::uniform_int_distribution<int> label_dist(1, ka);
    std::uniform_int_distribution<int> member_dist(0, cfg.population_size - 1);

    auto normalise = [&](Assignment& a) {
        if (canonical) a = canonical_labels(a);
    };

    // seed from posterior draws spread evenly over the sample
    std::vector<Assignment> population;
    population.reserve(sz(cfg.population_size));
    const std::size_t seeded = std::min(sz(cfg.population_size), draws.size());
    for (std::size_t i = 0; i < seeded; ++i) {
        Assignment a = draws[i * draws.size() / seeded];
        if (canonical) a = canonical_labels(a);
        for (Label& l : a)
            if (l > ka) l = label_dist(rng);
        normalise(a);
        population.push_back(std::move(a));
    }
    while (population.size() < sz(cfg.population_size)) {
        Assignment a(sz(n));
        for (Label& l : a) l = label_dist(rng);
        normalise(a);
        population.push_back(std::move(a));
    }

    std::vector<double> values(population.size());
    auto score_all = [&] {
        for (std::size_t i = 0; i < population.size(); ++i) values[i] = memo(population[i]);
    };
    auto best_index = [&] {
        return static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    };
    auto tournament = [&]() -> const Assignment& {
        std::size_t winner = sz(member_dist(rng));
        for (int j = 1; j < cfg.tournament_size; ++j) {
            const std::size_t c = sz(member_dist(rng));
            if (values[c] < values[winner]) winner = c;
        }
        return population[winner];
    };

    score_all();
    std::size_t bi = best_index();
    Assignment best = population[bi];
    double best_value = values[bi];

    int generation = 0;
    int stale = 0;
    std::vector<Assignment> next;
    next.reserve(population.size());
    while (generation < cfg.max_generations && stale < cfg.wait_generations) {
        ++generation;
        next.clear();
        next.push_back(best);
        while (next.size() < population.size()) {
            const Assignment& p1 = tournament();
            Assignment child = p1;
            if (uniform01(rng) < cfg.crossover_rate) {
                const Assignment& p2 = tournament();
                for (int i = 0; i < n; ++i)
                    if (uniform01(rng) < 0.5) child[sz(i)] = p2[sz(i)];
            }
            for (int i = 0; i < n; ++i)
                if (uniform01(rng) < cfg.mutation_rate) child[sz(i)] = label_dist(rng);
            normalise(child);
            next.push_back(std::move(child));
        }
        population.swap(next);
        score_all();
        bi = best_index();
        if (values[bi] < best_value - kImprovement) {
            best_value = values[bi];
            best = population[bi];
            stale = 0;
        } else {
            ++stale;
        }
    }

    if (cfg.local_search && best_value < kInf) {
        best = local_search(best, objective);
        normalise(best);
        best_value = memo(best);
    }
    if (!(best_value < kInf))
        throw DomainError("optimizer: every candidate leaves a target group empty; use delta > 0");

    OptimizationResult result;
    result.value = expected_loss(best, draws, spec);
    result.assignment = std::move(best);
    result.generations = generation;
    result.evaluations = memo.size();
    result.final_population = std::move(population);
    result.final_values = std::move(values);
    return result;
}

// ---------------------------------------------------------------------------
// Brute force

BruteForceResult brute_force_assignment(std::span<const Assignment> draws, const LossSpec& spec) {
    check_draws(draws, spec);
    const std::size_t n = draws.front().size();
    const int ka = spec.target_labels();
    double space = 1.0;
    for (std::size_t i = 0; i < n; ++i) space *= ka;
    if (space > 1e6)
        throw ConfigError("brute_force_assignment: " + std::to_string(ka) + "^" + std::to_string(n) +
                          " candidates exceed the 1e6 limit");

    BruteForceResult best{{}, kInf};
    Assignment a(n, 1);
    for (;;) {
        double value = expected_vi(a, draws);
        if (spec.lambda != 0.0) {
            try {
                value += spec.lambda * size_penalty(a, spec);
            } catch (const DomainError&) {
                value = kInf;  // empty target group with delta = 0
            }
        }
        if (value < best.value) best = {a, value};

        // next assignment in lexicographic order, last coordinate fastest
        std::size_t i = n;
        while (i > 0 && a[i - 1] == ka) a[--i] = 1;
        if (i == 0) break;
        ++a[i - 1];
    }
    if (!(best.value < kInf))
        throw DomainError("brute_force_assignment: every candidate leaves a target group empty; use delta > 0");
    return best;
}

}  // namespace sizeclust
