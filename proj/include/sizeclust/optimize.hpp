#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sizeclust/loss.hpp"
#include "sizeclust/types.hpp"

namespace sizeclust {

struct OptimizerConfig {
    int population_size = 3000;
    int max_generations = 2000;
    int wait_generations = 20;  // stop after this many generations without improvement
    double mutation_rate = 0.1;  // per-coordinate resampling probability
    double crossover_rate = 0.7;
    int tournament_size = 3;
    std::uint64_t seed = 1;
    bool local_search = true;

    void validate() const;
};

// Posterior expected loss of candidate actions against a fixed set of draws.
//
// Each draw is stored as one bitmask per label, so a joint count n_gh is a
// popcount of (action group g) & (draw group h). The expected VI is
//   (1/N) [ sum_g n_g log n_g + mean_t sum_h m_th log m_th - 2 mean_t sum_gh n_tgh log n_tgh ]
// with the middle term precomputed. The invariant-mode size term uses sorted
// centred log-ratio matching instead of permutation enumeration.
//
// Infeasible candidates (delta = 0 with an empty target group) evaluate to
// +infinity so searches can step around them.
class ExpectedLossEvaluator {
public:
    ExpectedLossEvaluator(std::span<const Assignment> draws, LossSpec spec);

    double operator()(std::span<const Label> a) const;
    double expected_vi(std::span<const Label> a) const;
    double size_term(std::span<const Label> a) const;

    int respondents() const noexcept { return n_; }
    int action_labels() const noexcept { return ka_; }
    std::size_t draws() const noexcept { return t_; }
    const LossSpec& spec() const noexcept { return spec_; }

private:
    double size_term_from_counts(std::span<const int> counts) const;

    LossSpec spec_;
    int n_ = 0;
    int ka_ = 0;
    int kz_ = 0;
    std::size_t t_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> masks_;  // [t][h][word]
    std::vector<double> xlogx_;         // c * log2(c) for c = 0..N
    double mean_draw_term_ = 0.0;       // mean_t sum_h m_th log2 m_th
    std::vector<double> eta_clr_sorted_;
};

struct OptimizationResult {
    Assignment assignment;
    double value = 0.0;  // expected loss, evaluated by the reference loss routines
    int generations = 0;
    std::size_t evaluations = 0;  // distinct candidates scored
    std::vector<Assignment> final_population;
    std::vector<double> final_values;
};

/// Minimises the Monte-Carlo expected loss over assignments with a genetic
/// algorithm (uniform crossover, per-coordinate resampling mutation, tournament
/// selection, elitism), followed by best-improvement local search when
/// cfg.local_search is set. The population is seeded from posterior draws.
/// For label-invariant losses individuals are kept in canonical labelling.
OptimizationResult optimize_assignment(std::span<const Assignment> draws, const LossSpec& spec,
                                       const OptimizerConfig& cfg = {});

struct BruteForceResult {
    Assignment assignment;
    double value = 0.0;
};

/// Exhaustive minimiser over all K_target^N assignments (lexicographically
/// smallest on ties). Refuses search spaces above 1e6 with ConfigError.
BruteForceResult brute_force_assignment(std::span<const Assignment> draws, const LossSpec& spec);

/// Repeatedly applies the best improving single-coordinate relabelling until
/// no change improves the objective (first move in (n, label) order wins ties).
Assignment local_search(std::span<const Label> start, const ExpectedLossEvaluator& objective);
Assignment local_search(std::span<const Label> start, std::span<const Assignment> draws, const LossSpec& spec);

}  // namespace sizeclust
