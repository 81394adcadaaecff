#include "sizeclust/simulate.hpp"

#include <numeric>
#include <string>

#include "sizeclust/errors.hpp"
#include "sizeclust/information.hpp"
#include "sizeclust/random.hpp"

namespace sizeclust {

namespace {
std::size_t sz(int v) { return static_cast<std::size_t>(v); }
}  // namespace

void SimConfig::validate() {
    if (respondents < 1 || clusters < 1 || questions < 1)
        throw DomainError("simulation: N, K and Q must be positive");
    if (levels.empty()) levels.assign(sz(questions), 3);
    if (levels.size() != sz(questions)) throw DomainError("simulation: need one alphabet size per question");
    for (int v : levels)
        if (v < 2) throw DomainError("simulation: alphabet sizes must be >= 2");
    if (group_sizes.empty())  // as even as possible, earlier groups one larger: 20 / 3 -> (7, 7, 6)
        for (int c = 0; c < clusters; ++c) group_sizes.push_back(respondents / clusters + (c < respondents % clusters));
    if (group_sizes.size() != sz(clusters)) throw DomainError("simulation: need one group size per cluster");
    for (int g : group_sizes)
        if (g < 0) throw DomainError("simulation: group sizes must be non-negative");
    if (std::accumulate(group_sizes.begin(), group_sizes.end(), 0) != respondents)
        throw DomainError("simulation: group sizes must sum to N");
    if (!(theta_concentration > 0.0) || !(phi_concentration > 0.0))
        throw DomainError("simulation: concentrations must be positive");
    if (!(beta_noise >= 0.0)) throw DomainError("simulation: beta_noise must be >= 0");
    if (!(prior_alpha > 0.0)) throw DomainError("simulation: prior_alpha must be positive");
}

SimulatedDataset simulate_dataset(SimConfig cfg) {
    cfg.validate();
    Rng rng(derive_seed(cfg.seed, 0x5157));
    const int n = cfg.respondents;
    const int k = cfg.clusters;
    const ProfileLayout layout(k, cfg.levels);

    SimulatedDataset out;
    auto& truth = out.truth;
    for (int c = 0; c < k; ++c) truth.z_true.insert(truth.z_true.end(), sz(cfg.group_sizes[sz(c)]), c + 1);

    truth.theta_true.resize(sz(n) * sz(k));
    std::vector<double> conc(sz(k));
    for (int i = 0; i < n; ++i) {
        std::fill(conc.begin(), conc.end(), 1.0);
        conc[sz(truth.z_true[sz(i)] - 1)] = cfg.theta_concentration;
        sample_dirichlet(conc, rng, std::span(truth.theta_true).subspan(sz(i) * sz(k), sz(k)));
    }

    truth.phi_true.resize(layout.size());
    truth.phi_concentration.assign(layout.size(), 1.0);
    for (int c = 0; c < k; ++c)
        for (int q = 0; q < cfg.questions; ++q) {
            const int v = layout.levels(q);
            const std::size_t o = layout.index(c, q);
            truth.phi_concentration[o + sz((c + q) % v)] = cfg.phi_concentration;
            sample_dirichlet(std::span(truth.phi_concentration).subspan(o, sz(v)), rng,
                             std::span(truth.phi_true).subspan(o, sz(v)));
        }

    auto& data = out.data;
    data.respondents = n;
    data.questions = cfg.questions;
    data.levels = cfg.levels;
    data.responses.resize(sz(n) * sz(cfg.questions));
    for (int i = 0; i < n; ++i)
        for (int q = 0; q < cfg.questions; ++q) {
            const auto cell = static_cast<int>(
                sample_categorical(std::span(truth.theta_true).subspan(sz(i) * sz(k), sz(k)), rng));
            const std::size_t o = layout.index(cell, q);
            const auto v = static_cast<int>(
                sample_categorical(std::span(truth.phi_true).subspan(o, sz(layout.levels(q))), rng));
            data.responses[sz(i) * sz(cfg.questions) + sz(q)] = v + 1;
        }
    data.validate();
    return out;
}

PriorSpec simulation_prior(const SimulatedDataset& sim, const SimConfig& cfg) {
    PriorSpec prior = PriorSpec::symmetric(sim.data, cfg.clusters, cfg.prior_alpha, 1.0);
    prior.beta = sim.truth.phi_concentration;
    if (cfg.beta_noise > 0.0) {
        Rng rng(derive_seed(cfg.seed, 0xB37A));
        std::uniform_real_distribution<double> noise(0.0, cfg.beta_noise);
        for (double& b : prior.beta) b += noise(rng);
    }
    return prior;
}

double accuracy(std::span<const Label> a, std::span<const Label> z_true) {
    if (a.size() != z_true.size()) throw DomainError("accuracy: length mismatch");
    if (a.empty()) throw DomainError("accuracy: empty assignment");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < a.size(); ++i) hits += a[i] == z_true[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(a.size());
}

double vi_from_truth(std::span<const Label> a, std::span<const Label> z_true) {
    return vi_loss(a, z_true);
}

}  // namespace sizeclust
