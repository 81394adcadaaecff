#include "sizeclust/relabel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sizeclust/composition.hpp"
#include "sizeclust/errors.hpp"

namespace sizeclust {

namespace {
std::size_t sz(int v) { return static_cast<std::size_t>(v); }
}  // namespace

double ScoreMatrix::support(std::span<const Label> sigma) const {
    double total = 0.0;
    for (int i = 1; i <= k; ++i) total += at(i, sigma[sz(i - 1)]);
    return total;
}

ScoreMatrix build_score_matrix(std::span<const Label> a_hat, std::span<const double> theta_draws, int respondents,
                               int k) {
    if (k < 1 || respondents < 1) throw DomainError("score matrix: need K >= 1 and N >= 1");
    if (a_hat.size() != sz(respondents)) throw DomainError("score matrix: action length does not match theta");
    const std::size_t stride = sz(respondents) * sz(k);
    if (theta_draws.empty() || theta_draws.size() % stride != 0)
        throw DomainError("score matrix: theta draws are not T x N x K");
    validate_assignment(a_hat, k, "score matrix");

    ScoreMatrix m{k, std::vector<double>(sz(k) * sz(k), 0.0)};
    const std::size_t draws = theta_draws.size() / stride;
    for (std::size_t t = 0; t < draws; ++t)
        for (int n = 0; n < respondents; ++n) {
            const int i = a_hat[sz(n)] - 1;
            const double* row = theta_draws.data() + t * stride + sz(n) * sz(k);
            for (int j = 0; j < k; ++j) {
                if (!(row[j] > 0.0)) throw DomainError("score matrix: theta draw has a non-positive entry");
                m.s[sz(i) * sz(k) + sz(j)] += std::log(row[j]);
            }
        }
    return m;
}

ScoreMatrix build_score_matrix(std::span<const Label> a_hat, const PosteriorSamples& samples) {
    return build_score_matrix(a_hat, samples.theta, samples.respondents, samples.k);
}

Identification identify_labels(std::span<const Label> a_hat, const ScoreMatrix& scores) {
    const int k = scores.k;
    if (k > kMaxPermutationLabels)
        throw ConfigError("identify_labels: exhaustive search over " + std::to_string(k) + "! permutations refused");
    validate_assignment(a_hat, k, "identify_labels");

    LabelPermutation sigma = identity_permutation(k);
    Identification best{{}, sigma, -std::numeric_limits<double>::infinity()};
    do {
        const double s = scores.support(sigma);
        if (s > best.support) {
            best.support = s;
            best.sigma = sigma;
        }
    } while (std::next_permutation(sigma.begin(), sigma.end()));

    best.assignment.resize(a_hat.size());
    for (std::size_t n = 0; n < a_hat.size(); ++n) best.assignment[n] = best.sigma[sz(a_hat[n] - 1)];
    return best;
}

Identification identify_labels(std::span<const Label> a_hat, const PosteriorSamples& samples) {
    return identify_labels(a_hat, build_score_matrix(a_hat, samples));
}

LabelSwitchingCheck check_label_switching(const PosteriorSamples& samples, double threshold) {
    const int chains = samples.chains();
    LabelSwitchingCheck out;
    if (chains < 2) return out;
    const std::size_t stride = sz(samples.respondents) * sz(samples.k);
    std::vector<double> means(sz(chains) * stride, 0.0);
    std::vector<int> counts(sz(chains), 0);
    for (int t = 0; t < samples.draws; ++t) {
        const int c = samples.chain_id[sz(t)];
        ++counts[sz(c)];
        auto d = samples.theta_draw(t);
        for (std::size_t i = 0; i < stride; ++i) means[sz(c) * stride + i] += d[i];
    }
    for (int c = 0; c < chains; ++c)
        for (std::size_t i = 0; i < stride; ++i) means[sz(c) * stride + i] /= counts[sz(c)];
    for (std::size_t i = 0; i < stride; ++i) {
        double lo = means[i], hi = means[i];
        for (int c = 1; c < chains; ++c) {
            lo = std::min(lo, means[sz(c) * stride + i]);
            hi = std::max(hi, means[sz(c) * stride + i]);
        }
        out.max_disagreement = std::max(out.max_disagreement, hi - lo);
    }
    out.suspected = out.max_disagreement > threshold;
    return out;
}

}  // namespace sizeclust
