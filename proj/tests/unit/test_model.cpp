#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "../support/oracles.hpp"
#include "sizeclust/errors.hpp"
#include "sizeclust/model.hpp"
#include "sizeclust/simulate.hpp"

using namespace sizeclust;

TEST_CASE("survey validation") {
    CHECK_THROWS(SurveyData::from_rows({{1, 3}}, {2, 2}));
    CHECK_THROWS(SurveyData::from_rows({{1, 2}, {1}}, {2, 2}));
    CHECK_THROWS(SurveyData::from_rows({{1}}, {1}));
    const auto d = SurveyData::from_rows({{1, 2}, {2, 3}}, {2, 3});
    CHECK(d.at(1, 1) == 3);
    CHECK(d.respondent_ids == std::vector<std::string>{"R1", "R2"});
    CHECK(d.question_ids == std::vector<std::string>{"Q1", "Q2"});
}

TEST_CASE("profile layout indexing") {
    const ProfileLayout l(2, {2, 3, 4});
    CHECK(l.row_width() == 9);
    CHECK(l.size() == 18);
    CHECK(l.index(0, 1, 0) == 2);
    CHECK(l.index(1, 2, 3) == 17);
}

TEST_CASE("log likelihood examples") {
    const auto d = SurveyData::from_rows({{2}}, {3});
    // phi_1 gives the observed option 0.2, phi_2 gives it 0.6
    const std::vector<double> phi{0.4, 0.2, 0.4, 0.2, 0.6, 0.2};
    CHECK(log_likelihood(d, std::vector<double>{0.5, 0.5}, phi, 2) == doctest::Approx(std::log(0.4)));

    const auto d2 = SurveyData::from_rows({{1, 3}, {2, 1}}, {2, 3});
    const std::vector<double> phi1{0.3, 0.7, 0.1, 0.2, 0.7};
    const double expected = std::log(0.3) + std::log(0.7) + std::log(0.7) + std::log(0.1);
    CHECK(log_likelihood(d2, std::vector<double>{1.0, 1.0}, phi1, 1) == doctest::Approx(expected));

    const std::vector<double> uniform{0.5, 0.5, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0.5, 0.5, 1.0 / 3, 1.0 / 3, 1.0 / 3};
    const double u = 2.0 * (std::log(0.5) + std::log(1.0 / 3));
    CHECK(log_likelihood(d2, std::vector<double>{0.9, 0.1, 0.2, 0.8}, uniform, 2) == doctest::Approx(u));

    CHECK_THROWS_AS(log_likelihood(d2, std::vector<double>{1.0}, phi1, 1), DomainError);
}

TEST_CASE("sample_z frequencies") {
    Rng rng(99);
    for (int i = 0; i < 1000; ++i) CHECK(sample_z(std::vector<double>{1.0, 0.0, 0.0}, rng) == 1);

    const std::vector<double> theta{0.2, 0.3, 0.5};
    const int draws = 100000;
    std::vector<int> counts(3, 0);
    for (int i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(sample_z(theta, rng) - 1)];
    for (std::size_t k = 0; k < 3; ++k) {
        const double se = std::sqrt(theta[k] * (1 - theta[k]) / draws);
        CHECK(std::abs(counts[k] / double(draws) - theta[k]) < 4 * se);
    }

    int ones = 0;
    for (int i = 0; i < draws; ++i) ones += sample_z(std::vector<double>{0.5, 0.5}, rng) == 1;
    CHECK(ones / double(draws) >= 0.494);
    CHECK(ones / double(draws) <= 0.506);

    CHECK_THROWS_AS(sample_z(std::vector<double>{0.5, 0.6}, rng), DomainError);
    CHECK_THROWS_AS(sample_z(std::vector<double>{1.2, -0.2}, rng), DomainError);
}

TEST_CASE("split rhat") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> norm;
    std::vector<std::vector<double>> chains(4, std::vector<double>(1000));
    int below = 0;
    for (int rep = 0; rep < 20; ++rep) {
        for (auto& c : chains)
            for (double& v : c) v = norm(rng);
        below += split_rhat(chains) < 1.01;
    }
    CHECK(below >= 18);

    auto offset = chains;
    for (double& v : offset[1]) v += 10.0;
    CHECK(split_rhat(offset) > 2.0);

    const std::vector<std::vector<double>> constant(3, std::vector<double>(10, 2.5));
    CHECK(split_rhat(constant) == 1.0);

    CHECK_THROWS_AS(split_rhat(std::vector<std::vector<double>>{{1, 2, 3, 4}}), DomainError);
    CHECK_THROWS_AS(split_rhat(std::vector<std::vector<double>>{{1, 2, 3}, {1, 2, 3}}), DomainError);
}

TEST_CASE("sampler config guards") {
    const auto d = SurveyData::from_rows({{1, 2}, {2, 1}}, {2, 2});
    const auto prior = PriorSpec::symmetric(d, 2);
    SamplerConfig cfg;
    cfg.chains = 1;
    CHECK_THROWS_AS(fit_posterior(d, prior, cfg), ConfigError);
    cfg.chains = 2;
    cfg.kept = 2;
    CHECK_THROWS_AS(fit_posterior(d, prior, cfg), ConfigError);
    cfg.compute_rhat = false;
    CHECK_NOTHROW(fit_posterior(d, prior, cfg));

    auto bad = prior;
    bad.alpha[0] = 0.0;
    CHECK_THROWS_AS(fit_posterior(d, bad, cfg), DomainError);
}

TEST_CASE("posterior draws lie inside the simplex and are deterministic") {
    SimConfig sc;
    sc.respondents = 8;
    sc.clusters = 2;
    sc.questions = 4;
    sc.group_sizes = {4, 4};
    const auto sim = simulate_dataset(sc);
    const auto prior = PriorSpec::symmetric(sim.data, 2);
    SamplerConfig cfg;
    cfg.burn_in = 50;
    cfg.kept = 100;
    cfg.seed = 42;
    const auto a = fit_posterior(sim.data, prior, cfg);
    const auto b = fit_posterior(sim.data, prior, cfg);
    CHECK(a.samples.theta == b.samples.theta);
    CHECK(a.samples.phi == b.samples.phi);
    CHECK(a.samples.z == b.samples.z);
    CHECK(a.samples.draws == 400);
    CHECK(a.samples.chains() == 4);

    const auto& s = a.samples;
    for (int t = 0; t < s.draws; ++t) {
        for (int n = 0; n < s.respondents; ++n) {
            const auto row = s.theta_row(t, n);
            double sum = 0.0;
            for (double v : row) {
                CHECK(v > 0.0);
                CHECK(v < 1.0);
                sum += v;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
        const auto phi = s.phi_draw(t);
        for (int k = 0; k < 2; ++k)
            for (int q = 0; q < s.layout.questions(); ++q) {
                double sum = 0.0;
                for (int v = 0; v < s.layout.levels(q); ++v) sum += phi[s.layout.index(k, q, v)];
                CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
            }
        for (int l : s.z_draw(t)) CHECK((l >= 1 && l <= 2));
    }

    CHECK(a.diagnostics.rhat.size() == 8 * 2 + 2 * 4 * 3);
    double mx = 0.0;
    for (const auto& r : a.diagnostics.rhat) mx = std::max(mx, r.rhat);
    CHECK(a.diagnostics.max_rhat == mx);

    cfg.seed = 43;
    CHECK(fit_posterior(sim.data, prior, cfg).samples.theta != a.samples.theta);
}

TEST_CASE("K=1 conjugate moments") {
    // With one cluster, phi_1q | X ~ Dirichlet(beta + counts) exactly, and
    // every Gibbs draw of phi is an independent draw from it.
    const auto d = SurveyData::from_rows({{1, 3}, {2, 3}, {1, 1}, {1, 2}, {2, 3}, {1, 3}}, {2, 3});
    auto prior = PriorSpec::symmetric(d, 1, 0.5, 1.0);
    prior.beta = {0.5, 2.0, 1.0, 0.7, 1.5};
    SamplerConfig cfg;
    cfg.chains = 2;
    cfg.burn_in = 10;
    cfg.kept = 10000;
    cfg.seed = 5;
    const auto fit = fit_posterior(d, prior, cfg);
    const auto& s = fit.samples;

    // beta + counts: q1 counts (4, 2), q2 counts (1, 1, 4)
    const std::vector<double> post{0.5 + 4, 2.0 + 2, 1.0 + 1, 0.7 + 1, 1.5 + 4};
    const std::vector<std::pair<int, int>> groups{{0, 2}, {2, 5}};
    for (auto [lo, hi] : groups) {
        double total = 0.0;
        for (int i = lo; i < hi; ++i) total += post[static_cast<std::size_t>(i)];
        for (int i = lo; i < hi; ++i) {
            const double m = post[static_cast<std::size_t>(i)] / total;
            const double var = m * (1 - m) / (total + 1);
            double mean = 0.0, sq = 0.0;
            for (int t = 0; t < s.draws; ++t) {
                const double v = s.phi_draw(t)[static_cast<std::size_t>(i)];
                mean += v;
                sq += v * v;
            }
            mean /= s.draws;
            const double sample_var = sq / s.draws - mean * mean;
            const double se_mean = std::sqrt(var / s.draws);
            CHECK(std::abs(mean - m) < 3 * se_mean);
            // variance of the sample variance ~ 2 var^2 / T for near-normal draws; use 4 var^2 / T for the tails
            CHECK(std::abs(sample_var - var) < 3 * std::sqrt(4 * var * var / s.draws));
        }
    }
}

TEST_CASE("tiny model matches the enumerated posterior") {
    oracle::TinyModel m;
    m.x = {{1, 2}, {1, 1}};
    const auto exact = oracle::exact_z_posterior(m);
    double mass = 0.0;
    for (const auto& row : exact)
        for (double v : row) mass += v;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

    const auto d = SurveyData::from_rows(m.x, {2, 2});
    const auto prior = PriorSpec::symmetric(d, 2, m.alpha, m.beta);
    SamplerConfig cfg;
    cfg.chains = 4;
    cfg.burn_in = 200;
    cfg.kept = 5000;
    cfg.seed = 3;
    cfg.compute_rhat = false;
    const auto fit = fit_posterior(d, prior, cfg);
    std::vector<std::vector<double>> emp(2, std::vector<double>(2, 0.0));
    for (int t = 0; t < fit.samples.draws; ++t) {
        const auto z = fit.samples.z_draw(t);
        emp[static_cast<std::size_t>(z[0] - 1)][static_cast<std::size_t>(z[1] - 1)] += 1.0 / fit.samples.draws;
    }
    double tv = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            tv += std::abs(emp[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] -
                           exact[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
    CHECK(tv / 2 < 0.02);
}

TEST_CASE("Gibbs stationarity (Geweke-style)") {
    // Start at the generating parameters; a correct sampler has no drift.
    SimConfig sc;
    sc.respondents = 12;
    sc.clusters = 2;
    sc.questions = 6;
    sc.group_sizes = {6, 6};
    sc.seed = 8;
    const auto sim = simulate_dataset(sc);
    const auto prior = simulation_prior(sim, sc);
    GibbsChain chain(sim.data, prior, 77);
    chain.set_state(ModelState{sim.truth.theta_true, sim.truth.phi_true});

    const int iters = 6000;
    std::vector<double> t1, t2;
    for (int i = 0; i < iters; ++i) {
        chain.sweep();
        t1.push_back(chain.state().theta[0]);
        t2.push_back(chain.state().phi[chain.layout().index(1, 2, 0)]);
    }
    auto batch_z = [](const std::vector<double>& x) {
        const std::size_t n = x.size();
        auto seg = [&](std::size_t lo, std::size_t hi) {
            // batch-means estimate of the mean and its variance
            const std::size_t batches = 20;
            const std::size_t len = (hi - lo) / batches;
            std::vector<double> means;
            for (std::size_t b = 0; b < batches; ++b)
                means.push_back(std::accumulate(x.begin() + static_cast<long>(lo + b * len),
                                                x.begin() + static_cast<long>(lo + (b + 1) * len), 0.0) /
                                static_cast<double>(len));
            const double mu = std::accumulate(means.begin(), means.end(), 0.0) / batches;
            double var = 0.0;
            for (double v : means) var += (v - mu) * (v - mu);
            var /= (batches - 1);
            return std::pair{mu, var / batches};
        };
        const auto [m1, v1] = seg(0, n / 10 * 2);
        const auto [m2, v2] = seg(n / 2, n);
        return (m1 - m2) / std::sqrt(v1 + v2);
    };
    CHECK(std::abs(batch_z(t1)) < 3.0);
    CHECK(std::abs(batch_z(t2)) < 3.0);
}

TEST_CASE("posterior summary and mean theta") {
    const auto d = SurveyData::from_rows({{1, 2}, {2, 1}, {1, 1}}, {2, 2});
    SamplerConfig cfg;
    cfg.burn_in = 20;
    cfg.kept = 50;
    const auto fit = fit_posterior(d, PriorSpec::symmetric(d, 2), cfg);
    const auto summary = summarize_posterior(fit.samples);
    REQUIRE(summary.size() == 3 * 2 + 2 * 4);
    CHECK(summary[0].parameter == "theta[1,1]");
    CHECK(summary[6].parameter == "phi[1,1,1]");
    for (const auto& p : summary) {
        CHECK(p.lower <= p.mean);
        CHECK(p.mean <= p.upper);
    }
    const auto mean = posterior_mean_theta(fit.samples);
    CHECK(mean[0] == doctest::Approx(summary[0].mean));
    CHECK(mean[0] + mean[1] == doctest::Approx(1.0));
}
