#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sizeclust/errors.hpp"
#include "sizeclust/simulate.hpp"

using namespace sizeclust;

namespace {

SimConfig even() {
    SimConfig c;
    c.respondents = 20;
    c.clusters = 3;
    c.questions = 10;
    c.group_sizes = {7, 7, 6};
    return c;
}

}  // namespace

TEST_CASE("simulated dataset shape and invariants") {
    for (const auto& sizes : {std::vector<int>{7, 7, 6}, std::vector<int>{8, 7, 5}}) {
        auto cfg = even();
        cfg.group_sizes = sizes;
        const auto sim = simulate_dataset(cfg);
        CHECK(sim.data.respondents == 20);
        CHECK(sim.data.questions == 10);
        CHECK(sim.data.levels == std::vector<int>(10, 3));

        std::vector<int> counts(3, 0);
        for (int l : sim.truth.z_true) ++counts[static_cast<std::size_t>(l - 1)];
        CHECK(counts == sizes);
        CHECK(std::is_sorted(sim.truth.z_true.begin(), sim.truth.z_true.end()));

        for (int x : sim.data.responses) CHECK((x >= 1 && x <= 3));
        for (int n = 0; n < 20; ++n) {
            double sum = 0.0;
            for (int k = 0; k < 3; ++k) sum += sim.truth.theta_true[static_cast<std::size_t>(n * 3 + k)];
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
        CHECK(sim.truth.phi_true.size() == 3u * 30u);
        for (std::size_t i = 0; i < sim.truth.phi_true.size(); i += 3)
            CHECK(sim.truth.phi_true[i] + sim.truth.phi_true[i + 1] + sim.truth.phi_true[i + 2] ==
                  doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("simulation is deterministic in the seed") {
    auto cfg = even();
    const auto a = simulate_dataset(cfg);
    const auto b = simulate_dataset(cfg);
    CHECK(a.data.responses == b.data.responses);
    CHECK(a.truth.theta_true == b.truth.theta_true);
    cfg.seed = 2;
    CHECK(simulate_dataset(cfg).data.responses != a.data.responses);
}

TEST_CASE("huge theta concentration gives one-hot memberships") {
    auto cfg = even();
    cfg.theta_concentration = 1e6;
    const auto sim = simulate_dataset(cfg);
    for (int n = 0; n < 20; ++n) {
        const int z = sim.truth.z_true[static_cast<std::size_t>(n)];
        CHECK(sim.truth.theta_true[static_cast<std::size_t>(n * 3 + z - 1)] > 0.9999);
    }
}

TEST_CASE("simulation config validation") {
    auto cfg = even();
    cfg.group_sizes = {7, 7, 5};
    CHECK_THROWS_AS(simulate_dataset(cfg), DomainError);
    cfg = even();
    cfg.phi_concentration = 0.0;
    CHECK_THROWS_AS(simulate_dataset(cfg), DomainError);
    cfg = even();
    cfg.group_sizes.clear();
    cfg.validate();
    CHECK(cfg.group_sizes == std::vector<int>{7, 7, 6});
    cfg = even();
    cfg.levels = {3, 3};
    CHECK_THROWS_AS(simulate_dataset(cfg), DomainError);
}

TEST_CASE("simulation prior") {
    auto cfg = even();
    const auto sim = simulate_dataset(cfg);
    auto prior = simulation_prior(sim, cfg);
    CHECK(prior.beta == sim.truth.phi_concentration);
    CHECK(prior.alpha == std::vector<double>(60, 0.5));

    cfg.beta_noise = 0.5;
    prior = simulation_prior(sim, cfg);
    for (std::size_t i = 0; i < prior.beta.size(); ++i) {
        CHECK(prior.beta[i] >= sim.truth.phi_concentration[i]);
        CHECK(prior.beta[i] <= sim.truth.phi_concentration[i] + 0.5);
    }
}

TEST_CASE("accuracy and vi from truth") {
    Assignment truth;
    for (int i = 0; i < 20; ++i) truth.push_back(i < 7 ? 1 : i < 14 ? 2 : 3);
    CHECK(accuracy(truth, truth) == 1.0);
    auto two_off = truth;
    two_off[0] = 2;
    two_off[19] = 1;
    CHECK(accuracy(two_off, truth) == doctest::Approx(0.9));
    CHECK(accuracy(Assignment(20, 1), truth) == doctest::Approx(0.35));

    CHECK(vi_from_truth(truth, truth) == 0.0);
    CHECK(vi_from_truth(Assignment(20, 1), truth) == doctest::Approx(1.5812908992306927).epsilon(1e-12));
    Assignment relabelled;
    for (int l : truth) relabelled.push_back(4 - l);
    CHECK(vi_from_truth(relabelled, truth) == 0.0);

    CHECK_THROWS_AS(accuracy(Assignment{1}, truth), DomainError);
    CHECK_THROWS_AS(vi_from_truth(Assignment{1}, truth), DomainError);
}
