#pragma once

#include <span>
#include <vector>

#include "sizeclust/model.hpp"
#include "sizeclust/types.hpp"

namespace sizeclust {

// s[i][j] = sum_t sum_n log theta^(t)_nj * 1{a_n = i}; row i indexes action
// labels, column j posterior labels. Stored row-major, K x K.
struct ScoreMatrix {
    int k = 0;
    std::vector<double> s;

    double at(int i, int j) const { return s[static_cast<std::size_t>((i - 1) * k + (j - 1))]; }

    // sum_i s[i][sigma(i)]
    double support(std::span<const Label> sigma) const;
};

/// theta_draws holds T x N x K values, strictly positive.
ScoreMatrix build_score_matrix(std::span<const Label> a_hat, std::span<const double> theta_draws, int respondents,
                               int k);
ScoreMatrix build_score_matrix(std::span<const Label> a_hat, const PosteriorSamples& samples);

struct Identification {
    Assignment assignment;   // sigma(a_hat_n) per respondent
    LabelPermutation sigma;  // sigma[i-1]: posterior label matched to action label i
    double support = 0.0;
};

/// Finds the permutation aligning action labels with posterior labels by
/// exhaustive search, maximising sum_i s[i][sigma(i)], and relabels the
/// action with it. Lexicographically smallest sigma wins ties. Rejects
/// K > 10 with ConfigError.
Identification identify_labels(std::span<const Label> a_hat, const ScoreMatrix& scores);
Identification identify_labels(std::span<const Label> a_hat, const PosteriorSamples& samples);

struct LabelSwitchingCheck {
    bool suspected = false;
    double max_disagreement = 0.0;  // max over (n, k) of the spread of per-chain theta means
};

/// Flags chains whose posterior mean theta disagree by more than threshold in
/// any coordinate, which is what between-chain label switching looks like.
LabelSwitchingCheck check_label_switching(const PosteriorSamples& samples, double threshold = 0.5);

}  // namespace sizeclust
