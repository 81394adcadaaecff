#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sizeclust/model.hpp"
#include "sizeclust/types.hpp"

namespace sizeclust {

struct SimConfig {
    int respondents = 20;
    int clusters = 3;
    int questions = 10;
    std::vector<int> levels;       // V_q; empty means 3 for every question
    std::vector<int> group_sizes;  // sums to respondents; empty means an even split
    double theta_concentration = 5.0;
    double phi_concentration = 5.0;
    std::uint64_t seed = 1;

    // Prior handed to the sampler in benchmark studies: beta is the
    // generating concentration plus U(0, beta_noise) per entry; alpha is
    // constant.
    double beta_noise = 0.0;
    double prior_alpha = 0.5;

    void validate();  // fills default levels
};

struct SimTruth {
    Assignment z_true;
    std::vector<double> theta_true;   // N x K
    std::vector<double> phi_true;     // ProfileLayout(K, levels)
    std::vector<double> phi_concentration;  // generating Dirichlet parameters, same layout
};

struct SimulatedDataset {
    SurveyData data;
    SimTruth truth;
};

/// Draws a dataset from the categorical mixture: z_true fills clusters in
/// order of group_sizes; theta_n ~ Dirichlet(theta_concentration on z_true,n,
/// 1 elsewhere); phi_kq ~ Dirichlet(phi_concentration on option
/// (k + q) mod V_q, 1 elsewhere); each response picks a cluster from theta_n
/// and then an option from that cluster's phi.
SimulatedDataset simulate_dataset(SimConfig cfg);

/// Prior built from the generating parameters (see SimConfig::beta_noise).
PriorSpec simulation_prior(const SimulatedDataset& sim, const SimConfig& cfg);

/// Fraction of positions where the labels agree (label-sensitive).
double accuracy(std::span<const Label> a, std::span<const Label> z_true);

/// VI between an action and the planted assignment.
double vi_from_truth(std::span<const Label> a, std::span<const Label> z_true);

}  // namespace sizeclust
