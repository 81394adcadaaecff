#include "sizeclust/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "sizeclust/errors.hpp"

namespace sizeclust {

namespace {

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

std::string theta_name(int n, int k) {
    return "theta[" + std::to_string(n + 1) + "," + std::to_string(k + 1) + "]";
}

std::string phi_name(int k, int q, int v) {
    return "phi[" + std::to_string(k + 1) + "," + std::to_string(q + 1) + "," + std::to_string(v + 1) + "]";
}

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance_of(std::span<const double> v, double mean) {
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size() - 1);
}

// Type-7 (linear interpolation) quantile of sorted data.
double quantile_sorted(std::span<const double> sorted, double p) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

// ---------------------------------------------------------------------------
// SurveyData

void SurveyData::validate() {
    if (respondents < 1 || questions < 1) throw DomainError("survey: need at least one respondent and one question");
    if (responses.size() != sz(respondents) * sz(questions))
        throw DomainError("survey: response matrix does not match N x Q");
    if (levels.size() != sz(questions)) throw DomainError("survey: one alphabet size per question required");
    for (int q = 0; q < questions; ++q)
        if (levels[sz(q)] < 2)
            throw DataError("survey: question " + std::to_string(q + 1) + " needs at least 2 response options", -1,
                            q + 1);
    for (int n = 0; n < respondents; ++n)
        for (int q = 0; q < questions; ++q) {
            const int x = at(n, q);
            if (x < 1 || x > levels[sz(q)])
                throw DataError("survey: response " + std::to_string(x) + " outside 1.." +
                                    std::to_string(levels[sz(q)]),
                                n + 1, q + 1);
        }
    if (respondent_ids.empty())
        for (int n = 0; n < respondents; ++n) respondent_ids.push_back("R" + std::to_string(n + 1));
    if (question_ids.empty())
        for (int q = 0; q < questions; ++q) question_ids.push_back("Q" + std::to_string(q + 1));
    if (respondent_ids.size() != sz(respondents) || question_ids.size() != sz(questions))
        throw DomainError("survey: id vectors do not match the response matrix");
}

SurveyData SurveyData::from_rows(const std::vector<std::vector<int>>& rows, std::vector<int> levels) {
    SurveyData d;
    d.respondents = static_cast<int>(rows.size());
    d.questions = static_cast<int>(levels.size());
    for (const auto& row : rows) {
        if (row.size() != levels.size()) throw DomainError("survey: ragged response rows");
        d.responses.insert(d.responses.end(), row.begin(), row.end());
    }
    d.levels = std::move(levels);
    d.validate();
    return d;
}

// ---------------------------------------------------------------------------
// ProfileLayout / PriorSpec

ProfileLayout::ProfileLayout(int k, std::vector<int> levels) : k_(k), levels_(std::move(levels)) {
    offsets_.reserve(levels_.size());
    for (int v : levels_) {
        offsets_.push_back(width_);
        width_ += v;
    }
}

PriorSpec PriorSpec::symmetric(const SurveyData& data, int k, double alpha, double beta) {
    PriorSpec p;
    p.k = k;
    p.alpha.assign(sz(data.respondents) * sz(k), alpha);
    p.beta.assign(ProfileLayout(k, data.levels).size(), beta);
    return p;
}

void PriorSpec::validate(const SurveyData& data) const {
    if (k < 1) throw DomainError("prior: K must be at least 1");
    if (alpha.size() != sz(data.respondents) * sz(k)) throw DomainError("prior: alpha must be N x K");
    if (beta.size() != ProfileLayout(k, data.levels).size()) throw DomainError("prior: beta must be K x sum(V_q)");
    auto bad = [](double v) { return !(v > 0.0) || !std::isfinite(v); };
    if (std::any_of(alpha.begin(), alpha.end(), bad)) throw DomainError("prior: alpha entries must be positive");
    if (std::any_of(beta.begin(), beta.end(), bad)) throw DomainError("prior: beta entries must be positive");
}

// ---------------------------------------------------------------------------
// PosteriorSamples

std::span<const double> PosteriorSamples::theta_draw(int t) const {
    const std::size_t stride = sz(respondents) * sz(k);
    return std::span<const double>(theta).subspan(sz(t) * stride, stride);
}

std::span<const double> PosteriorSamples::theta_row(int t, int n) const {
    return theta_draw(t).subspan(sz(n) * sz(k), sz(k));
}

std::span<const double> PosteriorSamples::phi_draw(int t) const {
    return std::span<const double>(phi).subspan(sz(t) * layout.size(), layout.size());
}

std::span<const Label> PosteriorSamples::z_draw(int t) const {
    return std::span<const Label>(z).subspan(sz(t) * sz(respondents), sz(respondents));
}

std::vector<Assignment> PosteriorSamples::z_draws() const {
    std::vector<Assignment> out;
    out.reserve(sz(draws));
    for (int t = 0; t < draws; ++t) {
        auto d = z_draw(t);
        out.emplace_back(d.begin(), d.end());
    }
    return out;
}

int PosteriorSamples::chains() const {
    return chain_id.empty() ? 0 : *std::max_element(chain_id.begin(), chain_id.end()) + 1;
}

// ---------------------------------------------------------------------------
// Free functions

double log_likelihood(const SurveyData& data, std::span<const double> theta, std::span<const double> phi, int k) {
    const ProfileLayout layout(k, data.levels);
    if (theta.size() != sz(data.respondents) * sz(k)) throw DomainError("log_likelihood: theta must be N x K");
    if (phi.size() != layout.size()) throw DomainError("log_likelihood: phi does not match K x sum(V_q)");
    double ll = 0.0;
    for (int n = 0; n < data.respondents; ++n)
        for (int q = 0; q < data.questions; ++q) {
            const int v = data.at(n, q) - 1;
            double p = 0.0;
            for (int c = 0; c < k; ++c) p += phi[layout.index(c, q, v)] * theta[sz(n) * sz(k) + sz(c)];
            ll += std::log(p);
        }
    return ll;
}

Label sample_z(std::span<const double> theta_row, Rng& rng) {
    if (theta_row.empty()) throw DomainError("sample_z: empty probability vector");
    double total = 0.0;
    for (double p : theta_row) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("sample_z: probabilities must be non-negative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-8) throw DomainError("sample_z: probabilities do not sum to one");
    return static_cast<Label>(sample_categorical(theta_row, rng)) + 1;
}

double split_rhat(std::span<const std::vector<double>> chains) {
    if (chains.size() < 2) throw DomainError("split_rhat: need at least two chains");
    std::size_t n = chains.front().size();
    for (const auto& c : chains) n = std::min(n, c.size());
    if (n < 4) throw DomainError("split_rhat: need at least four draws per chain");
    const std::size_t half = n / 2;

    std::vector<double> means;
    std::vector<double> vars;
    for (const auto& c : chains) {
        for (std::size_t start : {std::size_t{0}, n - half}) {
            std::span<const double> seg(c.data() + start, half);
            const double m = mean_of(seg);
            means.push_back(m);
            vars.push_back(variance_of(seg, m));
        }
    }
    const double w = mean_of(vars);
    const double grand = mean_of(means);
    const double b = static_cast<double>(half) * variance_of(means, grand);
    if (w <= 0.0) return b <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    const double hn = static_cast<double>(half);
    const double var_plus = (hn - 1.0) / hn * w + b / hn;
    return std::sqrt(var_plus / w);
}

// ---------------------------------------------------------------------------
// GibbsChain

GibbsChain::GibbsChain(const SurveyData& data, const PriorSpec& prior, std::uint64_t seed)
    : data_(data), prior_(prior), layout_(prior.k, data.levels), rng_(seed) {
    prior_.validate(data_);
    const int k = prior_.k;
    state_.theta.resize(sz(data_.respondents) * sz(k));
    state_.phi.resize(layout_.size());
    for (int n = 0; n < data_.respondents; ++n) {
        const std::size_t o = sz(n) * sz(k);
        sample_dirichlet(std::span(prior_.alpha).subspan(o, sz(k)), rng_, std::span(state_.theta).subspan(o, sz(k)));
    }
    for (int c = 0; c < k; ++c)
        for (int q = 0; q < data_.questions; ++q) {
            const std::size_t o = layout_.index(c, q);
            const std::size_t v = sz(layout_.levels(q));
            sample_dirichlet(std::span(prior_.beta).subspan(o, v), rng_, std::span(state_.phi).subspan(o, v));
        }
    member_counts_.resize(state_.theta.size());
    response_counts_.resize(state_.phi.size());
    weights_.resize(sz(k));
    scratch_.resize(std::max(sz(k), sz(*std::max_element(data_.levels.begin(), data_.levels.end()))));
}

void GibbsChain::set_state(ModelState state) {
    if (state.theta.size() != state_.theta.size() || state.phi.size() != state_.phi.size())
        throw DomainError("GibbsChain::set_state: state dimensions do not match the model");
    state_ = std::move(state);
}

void GibbsChain::sweep() {
    const int k = prior_.k;
    std::fill(member_counts_.begin(), member_counts_.end(), 0.0);
    std::fill(response_counts_.begin(), response_counts_.end(), 0.0);

    // indicators c_nq
    for (int n = 0; n < data_.respondents; ++n) {
        const double* theta_n = state_.theta.data() + sz(n) * sz(k);
        for (int q = 0; q < data_.questions; ++q) {
            const int v = data_.at(n, q) - 1;
            double total = 0.0;
            for (int c = 0; c < k; ++c) {
                weights_[sz(c)] = theta_n[c] * state_.phi[layout_.index(c, q, v)];
                total += weights_[sz(c)];
            }
            if (!(total > 0.0))  // every product underflowed
                for (int c = 0; c < k; ++c) weights_[sz(c)] = state_.phi[layout_.index(c, q, v)];
            const auto c =static_cast<int>(sample_categorical(weights_, rng_));
            member_counts_[sz(n) * sz(k) + sz(c)] += 1.0;
            response_counts_[layout_.index(c, q, v)] += 1.0;
        }
    }

    // theta_n | c
    for (int n = 0; n < data_.respondents; ++n) {
        const std::size_t o = sz(n) * sz(k);
        for (int c = 0; c < k; ++c) scratch_[sz(c)] = prior_.alpha[o + sz(c)] + member_counts_[o + sz(c)];
        sample_dirichlet(std::span(scratch_).first(sz(k)), rng_, std::span(state_.theta).subspan(o, sz(k)));
    }

    // phi_kq | c
    for (int c = 0; c < k; ++c)
        for (int q = 0; q < data_.questions; ++q) {
            const std::size_t o = layout_.index(c, q);
            const std::size_t levels = sz(layout_.levels(q));
            for (std::size_t v = 0; v < levels; ++v) scratch_[v] = prior_.beta[o + v] + response_counts_[o + v];
            sample_dirichlet(std::span(scratch_).first(levels), rng_, std::span(state_.phi).subspan(o, levels));
        }
}

Assignment GibbsChain::sample_assignment() {
    const int k = prior_.k;
    Assignment z(sz(data_.respondents));
    for (int n = 0; n < data_.respondents; ++n)
        z[sz(n)] = sample_z(std::span(state_.theta).subspan(sz(n) * sz(k), sz(k)), rng_);
    return z;
}

// ---------------------------------------------------------------------------
// Fitting

namespace {

struct ChainOutput {
    std::vector<double> theta;
    std::vector<double> phi;
    std::vector<Label> z;
};

ChainOutput run_chain(const SurveyData& data, const PriorSpec& prior, const SamplerConfig& cfg, int chain) {
    GibbsChain gibbs(data, prior, derive_seed(cfg.seed, static_cast<std::uint64_t>(chain)));
    for (int i = 0; i < cfg.burn_in; ++i) gibbs.sweep();
    ChainOutput out;
    out.theta.reserve(sz(cfg.kept) * gibbs.state().theta.size());
    out.phi.reserve(sz(cfg.kept) * gibbs.state().phi.size());
    out.z.reserve(sz(cfg.kept) * sz(data.respondents));
    for (int i = 0; i < cfg.kept; ++i) {
        gibbs.sweep();
        const auto& s = gibbs.state();
        out.theta.insert(out.theta.end(), s.theta.begin(), s.theta.end());
        out.phi.insert(out.phi.end(), s.phi.begin(), s.phi.end());
        const auto z = gibbs.sample_assignment();
        out.z.insert(out.z.end(), z.begin(), z.end());
    }
    return out;
}

}  // namespace

PosteriorFit fit_posterior(const SurveyData& data, const PriorSpec& prior, const SamplerConfig& cfg) {
    prior.validate(data);
    if (cfg.chains < 1) throw ConfigError("sampler: chains must be at least 1");
    if (cfg.kept < 1 || cfg.burn_in < 0) throw ConfigError("sampler: kept must be >= 1 and burn_in >= 0");
    if (cfg.compute_rhat && cfg.chains < 2) throw ConfigError("sampler: R-hat needs at least two chains");
    if (cfg.compute_rhat && cfg.kept < 4) throw ConfigError("sampler: R-hat needs at least four kept draws");

    std::vector<ChainOutput> outputs(sz(cfg.chains));
    const unsigned hw = std::thread::hardware_concurrency();
    if (hw > 1 && cfg.chains > 1) {
        std::vector<std::jthread> workers;
        for (int c = 0; c < cfg.chains; ++c)
            workers.emplace_back([&, c] { outputs[sz(c)] = run_chain(data, prior, cfg, c); });
    } else {
        for (int c = 0; c < cfg.chains; ++c) outputs[sz(c)] = run_chain(data, prior, cfg, c);
    }

    PosteriorFit fit;
    auto& s = fit.samples;
    s.draws = cfg.chains * cfg.kept;
    s.respondents = data.respondents;
    s.k = prior.k;
    s.layout = ProfileLayout(prior.k, data.levels);
    for (int c = 0; c < cfg.chains; ++c) {
        auto& o = outputs[sz(c)];
        s.theta.insert(s.theta.end(), o.theta.begin(), o.theta.end());
        s.phi.insert(s.phi.end(), o.phi.begin(), o.phi.end());
        s.z.insert(s.z.end(), o.z.begin(), o.z.end());
        s.chain_id.insert(s.chain_id.end(), sz(cfg.kept), c);
    }
    if (cfg.compute_rhat) {
        fit.diagnostics = compute_diagnostics(s, cfg.rhat_threshold);
    } else {
        fit.diagnostics.threshold = cfg.rhat_threshold;
        fit.diagnostics.ess_note = "R-hat not computed";
    }
    return fit;
}

Diagnostics compute_diagnostics(const PosteriorSamples& samples, double threshold) {
    const int chains = samples.chains();
    if (chains < 2) throw ConfigError("diagnostics: R-hat needs at least two chains");
    const int per_chain = samples.draws / chains;

    Diagnostics d;
    d.threshold = threshold;
    d.max_rhat = 0.0;
    std::vector<std::vector<double>> traces(sz(chains), std::vector<double>(sz(per_chain)));

    auto record = [&](std::string name) {
        const double r = split_rhat(traces);
        if (r > d.max_rhat || d.max_rhat_parameter.empty()) {
            d.max_rhat = r;
            d.max_rhat_parameter = name;
        }
        d.rhat.push_back({std::move(name), r});
    };

    const int k = samples.k;
    for (int n = 0; n < samples.respondents; ++n)
        for (int c = 0; c < k; ++c) {
            for (int t = 0; t < samples.draws; ++t)
                traces[sz(samples.chain_id[sz(t)])][sz(t % per_chain)] = samples.theta_row(t, n)[sz(c)];
            record(theta_name(n, c));
        }
    const auto& layout = samples.layout;
    for (int c = 0; c < k; ++c)
        for (int q = 0; q < layout.questions(); ++q)
            for (int v = 0; v < layout.levels(q); ++v) {
                const std::size_t idx = layout.index(c, q, v);
                for (int t = 0; t < samples.draws; ++t)
                    traces[sz(samples.chain_id[sz(t)])][sz(t % per_chain)] = samples.phi_draw(t)[idx];
                record(phi_name(c, q, v));
            }
    d.converged = d.max_rhat < threshold;
    return d;
}

std::vector<double> posterior_mean_theta(const PosteriorSamples& samples) {
    const std::size_t stride = sz(samples.respondents) * sz(samples.k);
    std::vector<double> mean(stride, 0.0);
    for (int t = 0; t < samples.draws; ++t) {
        auto d = samples.theta_draw(t);
        for (std::size_t i = 0; i < stride; ++i) mean[i] += d[i];
    }
    for (double& m : mean) m /= static_cast<double>(samples.draws);
    return mean;
}

std::vector<ParameterSummary> summarize_posterior(const PosteriorSamples& samples) {
    std::vector<ParameterSummary> out;
    std::vector<double> trace(sz(samples.draws));
    auto summarise = [&](std::string name) {
        const double m = mean_of(trace);
        std::sort(trace.begin(), trace.end());
        out.push_back({std::move(name), m, quantile_sorted(trace, 0.025), quantile_sorted(trace, 0.975)});
    };
    for (int n = 0; n < samples.respondents; ++n)
        for (int c = 0; c < samples.k; ++c) {
            for (int t = 0; t < samples.draws; ++t) trace[sz(t)] = samples.theta_row(t, n)[sz(c)];
            summarise(theta_name(n, c));
        }
    const auto& layout = samples.layout;
    for (int c = 0; c < samples.k; ++c)
        for (int q = 0; q < layout.questions(); ++q)
            for (int v = 0; v < layout.levels(q); ++v) {
                for (int t = 0; t < samples.draws; ++t) trace[sz(t)] = samples.phi_draw(t)[layout.index(c, q, v)];
                summarise(phi_name(c, q, v));
            }
    return out;
}

}  // namespace sizeclust
