#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "../support/oracles.hpp"
#include "sizeclust/composition.hpp"
#include "sizeclust/errors.hpp"

using namespace sizeclust;

TEST_CASE("closure counts groups") {
    const Assignment a{1, 1, 2, 3, 3};
    const auto c = closure(a, 3);
    CHECK(c == Composition{0.4, 0.2, 0.4});

    CHECK(closure(Assignment{1, 1, 1, 1}, 1) == Composition{1.0});
    CHECK(closure(Assignment{1, 2}, 3) == Composition{0.5, 0.5, 0.0});
}

TEST_CASE("closure rejects bad input") {
    CHECK_THROWS_AS(closure(Assignment{}, 2), DomainError);
    CHECK_THROWS_AS(closure(Assignment{1, 3}, 2), DomainError);
    CHECK_THROWS_AS(closure(Assignment{0, 1}, 2), DomainError);
}

TEST_CASE("closure sums to one") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 200; ++rep) {
        const int k = 2 + rep % 5;
        const auto a = oracle::random_assignment(rng, 1 + rep % 30, k);
        const auto c = closure(a, k);
        CHECK(std::accumulate(c.begin(), c.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("closure_pseudo follows the printed formula") {
    const auto c = closure_pseudo(Assignment{1, 1, 2}, 3, 0.1);
    REQUIRE(c.size() == 3);
    CHECK(c[0] == doctest::Approx(2.1 / 3.3).epsilon(1e-15));
    CHECK(c[1] == doctest::Approx(1.1 / 3.3).epsilon(1e-15));
    CHECK(c[2] == doctest::Approx(0.1 / 3.3).epsilon(1e-15));

    CHECK(closure_pseudo(Assignment{1, 1}, 2, 1.0) == Composition{0.75, 0.25});

    const Assignment a{1, 2, 2, 3, 1, 1};
    CHECK(closure_pseudo(a, 4, 0.0) == closure(a, 4));

    CHECK_THROWS_AS(closure_pseudo(a, 3, -0.1), DomainError);
}

TEST_CASE("aitchison closed forms") {
    const double d1 = aitchison_distance(Composition{0.25, 0.75}, Composition{0.75, 0.25});
    CHECK(d1 == doctest::Approx(2.0 * std::log(3.0) / std::sqrt(2.0)).epsilon(1e-14));

    const double e2 = std::exp(2.0);
    const double d2 = aitchison_distance(Composition{0.5, 0.5}, Composition{e2 / (1 + e2), 1 / (1 + e2)});
    CHECK(d2 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

    const Composition x{0.2, 0.3, 0.5};
    CHECK(aitchison_distance(x, x) == 0.0);
}

TEST_CASE("aitchison errors") {
    CHECK_THROWS_AS(aitchison_distance(Composition{0.5, 0.5}, Composition{1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(aitchison_distance(Composition{-1.0, 2.0}, Composition{1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(aitchison_distance(Composition{0.5, 0.5}, Composition{0.2, 0.3, 0.5}), DomainError);
}

TEST_CASE("aitchison agrees with the double sum") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 500; ++rep) {
        const std::size_t d = 2 + static_cast<std::size_t>(rep % 5);
        const auto x = oracle::random_composition(rng, d);
        const auto y = oracle::random_composition(rng, d);
        CHECK(aitchison_distance(x, y) == doctest::Approx(oracle::aitchison_double_sum(x, y)).epsilon(1e-12));
    }
}

TEST_CASE("aitchison scale and perturbation invariance") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t d = 2 + static_cast<std::size_t>(rep % 5);
        auto x = oracle::random_composition(rng, d);
        auto y = oracle::random_composition(rng, d);
        const double base = aitchison_distance(x, y);
        const double sx = scale(rng), sy = scale(rng);
        auto xs = x, ys = y;
        for (double& v : xs) v *= sx;
        for (double& v : ys) v *= sy;
        CHECK(aitchison_distance(xs, ys) == doctest::Approx(base).epsilon(1e-12));

        const auto p = oracle::random_composition(rng, d);
        for (std::size_t i = 0; i < d; ++i) {
            x[i] *= p[i];
            y[i] *= p[i];
        }
        CHECK(aitchison_distance(x, y) == doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("min_perm_aitchison examples") {
    auto r = min_perm_aitchison(Composition{0.25, 0.75}, Composition{0.75, 0.25});
    CHECK(r.distance < 1e-12);
    CHECK(r.best == LabelPermutation{2, 1});

    r = min_perm_aitchison(Composition{0.5, 0.3, 0.2}, Composition{0.2, 0.5, 0.3});
    CHECK(r.distance < 1e-12);
    CHECK(r.best == LabelPermutation{3, 1, 2});

    const Composition u{0.25, 0.25, 0.25, 0.25};
    const Composition c{0.1, 0.2, 0.3, 0.4};
    r = min_perm_aitchison(u, c);
    CHECK(r.distance == aitchison_distance(u, c));
    CHECK(r.best == identity_permutation(4));
}

TEST_CASE("min_perm_aitchison ties pick the lexicographically first permutation") {
    const auto r = min_perm_aitchison(Composition{0.5, 0.5, 1.0}, Composition{1.0, 0.5, 0.5});
    CHECK(r.distance < 1e-12);
    CHECK(r.best == LabelPermutation{3, 1, 2});
}

TEST_CASE("min_perm_aitchison guards K") {
    const Composition big(11, 1.0);
    CHECK_THROWS_AS(min_perm_aitchison(big, big), ConfigError);
    CHECK_NOTHROW(min_perm_aitchison_sorted(big, big));
}

TEST_CASE("min_perm bounds and sorted route") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t d = 2 + static_cast<std::size_t>(rep % 5);
        const auto eta = oracle::random_composition(rng, d);
        const auto c = oracle::random_composition(rng, d);
        const auto r = min_perm_aitchison(eta, c);
        CHECK(r.distance <= aitchison_distance(eta, c));

        // brute-force oracle over permutations
        std::vector<std::size_t> p(d);
        std::iota(p.begin(), p.end(), 0);
        double best = INFINITY;
        do {
            std::vector<double> perm(d);
            for (std::size_t i = 0; i < d; ++i) perm[i] = eta[p[i]];
            best = std::min(best, oracle::aitchison_double_sum(perm, c));
        } while (std::next_permutation(p.begin(), p.end()));
        CHECK(r.distance == doctest::Approx(best).epsilon(1e-12));
        CHECK(min_perm_aitchison_sorted(eta, c) == doctest::Approx(best).epsilon(1e-9));
    }
}

TEST_CASE("empty-group penalty decreases in delta") {
    const Assignment a{1, 1, 1, 2, 2, 2};  // group 3 empty
    const Composition eta{1.0, 1.0, 1.0};
    double previous = INFINITY;
    for (double delta : {0.01, 0.05, 0.1, 0.5, 1.0}) {
        const double d = aitchison_distance(eta, closure_pseudo(a, 3, delta));
        CHECK(d < previous);
        previous = d;
    }
}

TEST_CASE("clr centres log parts") {
    const auto v = clr(Composition{1.0, std::exp(2.0)});
    CHECK(v[0] == doctest::Approx(-1.0));
    CHECK(v[1] == doctest::Approx(1.0));
    CHECK_THROWS_AS(clr(Composition{1.0, 0.0}), DomainError);
}
