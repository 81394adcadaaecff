#pragma once

// Bayesian categorical mixture model for survey responses.
//
// Respondent n has mixture weights theta_n on the K-simplex; cluster k answers
// question q according to phi_kq on the V_q-simplex. Each response is drawn
// from a cluster chosen by theta_n independently per question, so the
// likelihood is prod_n prod_q sum_k theta_nk phi_kq[x_nq]. Both theta_n and
// phi_kq carry Dirichlet priors.
//
// Posterior sampling is an uncollapsed Gibbs sampler over the augmented
// model with per-response cluster indicators c_nq:
//   c_nq        ~ Categorical(theta_nk * phi_kq[x_nq])
//   theta_n | c ~ Dirichlet(alpha_n + #{q : c_nq = k})
//   phi_kq  | c ~ Dirichlet(beta_kq + #{n : c_nq = k, x_nq = v})

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sizeclust/random.hpp"
#include "sizeclust/types.hpp"

namespace sizeclust {

// N x Q matrix of integer-coded responses, x_nq in {1..V_q}.
struct SurveyData {
    int respondents = 0;
    int questions = 0;
    std::vector<int> responses;  // row-major N x Q
    std::vector<int> levels;     // V_q per question, each >= 2
    std::vector<std::string> respondent_ids;
    std::vector<std::string> question_ids;

    int at(int n, int q) const {
        return responses[static_cast<std::size_t>(n) * static_cast<std::size_t>(questions) +
                         static_cast<std::size_t>(q)];
    }

    // Throws DomainError when a response falls outside its alphabet or the
    // shape is inconsistent. Fills default ids when none are set.
    void validate();

    static SurveyData from_rows(const std::vector<std::vector<int>>& rows, std::vector<int> levels);
};

// Flat indexing of the ragged K x Q x V_q profile array.
class ProfileLayout {
public:
    ProfileLayout() = default;
    ProfileLayout(int k, std::vector<int> levels);

    int clusters() const noexcept { return k_; }
    int questions() const noexcept { return static_cast<int>(levels_.size()); }
    int levels(int q) const { return levels_[static_cast<std::size_t>(q)]; }
    const std::vector<int>& all_levels() const noexcept { return levels_; }

    // Options summed over questions.
    int row_width() const noexcept { return width_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(k_) * static_cast<std::size_t>(width_); }

    // Index of phi_kq[v] with 0-based k, q and v.
    std::size_t index(int k, int q, int v = 0) const {
        return static_cast<std::size_t>(k) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(offsets_[static_cast<std::size_t>(q)] + v);
    }

private:
    int k_ = 0;
    int width_ = 0;
    std::vector<int> levels_;
    std::vector<int> offsets_;
};

struct PriorSpec {
    int k = 0;
    std::vector<double> alpha;  // N x K
    std::vector<double> beta;   // ProfileLayout(k, levels)

    // alpha_n = (alpha, ..., alpha) for every respondent; beta_kq = (beta, ..., beta).
    static PriorSpec symmetric(const SurveyData& data, int k, double alpha = 0.5, double beta = 1.0);

    void validate(const SurveyData& data) const;
};

struct SamplerConfig {
    int chains = 4;
    int burn_in = 1000;
    int kept = 1000;
    std::uint64_t seed = 1;
    double rhat_threshold = 1.01;
    bool compute_rhat = true;
};

// Parameter values of one Gibbs state.
struct ModelState {
    std::vector<double> theta;  // N x K
    std::vector<double> phi;    // ProfileLayout
};

// Kept draws concatenated over chains (chain 0 first).
struct PosteriorSamples {
    int draws = 0;
    int respondents = 0;
    int k = 0;
    ProfileLayout layout;
    std::vector<double> theta;  // draws x N x K
    std::vector<double> phi;    // draws x layout.size()
    std::vector<Label> z;       // draws x N, labels 1..K
    std::vector<int> chain_id;  // per draw, 0-based

    std::span<const double> theta_draw(int t) const;
    std::span<const double> theta_row(int t, int n) const;
    std::span<const double> phi_draw(int t) const;
    std::span<const Label> z_draw(int t) const;
    std::vector<Assignment> z_draws() const;
    int chains() const;
};

struct RhatEntry {
    std::string parameter;  // theta[n,k] or phi[k,q,v], 1-based
    double rhat;
};

struct Diagnostics {
    std::vector<RhatEntry> rhat;
    double max_rhat = 1.0;
    std::string max_rhat_parameter;
    double threshold = 1.01;
    bool converged = true;
    std::optional<std::string> ess_note;
};

struct PosteriorFit {
    PosteriorSamples samples;
    Diagnostics diagnostics;
};

/// sum_n sum_q log(sum_k phi_kq[x_nq] theta_nk).
double log_likelihood(const SurveyData& data, std::span<const double> theta, std::span<const double> phi, int k);

/// Label in {1..K} with probability theta_k. Rejects rows off the simplex
/// (negative entries or a sum more than 1e-8 from one).
Label sample_z(std::span<const double> theta_row, Rng& rng);

/// Split-chain potential scale reduction. Each chain is cut in half (the
/// middle draw dropped for odd lengths), and the halves are compared as
/// separate chains. Identical constant chains give 1.
double split_rhat(std::span<const std::vector<double>> chains);

class GibbsChain {
public:
    // Initialises theta and phi with a draw from the prior.
    GibbsChain(const SurveyData& data, const PriorSpec& prior, std::uint64_t seed);

    void set_state(ModelState state);
    const ModelState& state() const noexcept { return state_; }
    const ProfileLayout& layout() const noexcept { return layout_; }

    void sweep();

    // z_n ~ Categorical(theta_n) for the current state.
    Assignment sample_assignment();

private:
    const SurveyData& data_;
    const PriorSpec& prior_;
    ProfileLayout layout_;
    Rng rng_;
    ModelState state_;
    std::vector<double> member_counts_;    // N x K
    std::vector<double> response_counts_;  // layout
    std::vector<double> weights_;
    std::vector<double> scratch_;
};

/// Runs cfg.chains independent Gibbs chains, discards burn-in, keeps cfg.kept
/// draws per chain with a z draw for each, and reports split R-hat for every
/// theta and phi coordinate. Deterministic in (data, prior, cfg.seed).
PosteriorFit fit_posterior(const SurveyData& data, const PriorSpec& prior, const SamplerConfig& cfg);

/// Split R-hat for every theta and phi coordinate of a multi-chain sample.
Diagnostics compute_diagnostics(const PosteriorSamples& samples, double threshold);

struct ParameterSummary {
    std::string parameter;
    double mean;
    double lower;  // 2.5% quantile
    double upper;  // 97.5% quantile
};

/// Posterior mean and central 95% interval (linear-interpolated quantiles)
/// per theta coordinate, then per phi coordinate.
std::vector<ParameterSummary> summarize_posterior(const PosteriorSamples& samples);

/// Posterior mean of theta, N x K.
std::vector<double> posterior_mean_theta(const PosteriorSamples& samples);

}  // namespace sizeclust
