#include "sizeclust/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sizeclust/errors.hpp"

namespace sizeclust {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    // splitmix64 finaliser over the combined words
    std::uint64_t x = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

void sample_dirichlet(std::span<const double> concentration, Rng& rng, std::span<double> out) {
    if (concentration.size() != out.size() || concentration.empty())
        throw DomainError("sample_dirichlet: size mismatch");

    // log Gamma(a) draws; for a < 1 use Gamma(a) = Gamma(a + 1) * U^(1/a)
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < concentration.size(); ++i) {
        const double a = concentration[i];
        if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("sample_dirichlet: concentration must be positive");
        double log_g;
        if (a >= 1.0) {
            std::gamma_distribution<double> gamma(a, 1.0);
            log_g = std::log(gamma(rng));
        } else {
            std::gamma_distribution<double> gamma(a + 1.0, 1.0);
            double u = uniform01(rng);
            while (u <= 0.0) u = uniform01(rng);
            log_g = std::log(gamma(rng)) + std::log(u) / a;
        }
        out[i] = log_g;
        max_log = std::max(max_log, log_g);
    }

    constexpr double floor = std::numeric_limits<double>::min();
    double total = 0.0;
    for (double& v : out) {
        v = std::max(std::exp(v - max_log), floor);
        total += v;
    }
    for (double& v : out) v = std::max(v / total, floor);
}

std::size_t sample_categorical(std::span<const double> weights, Rng& rng) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw DomainError("sample_categorical: weights must have a positive sum");
    const double u = uniform01(rng) * total;
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        acc += weights[i];
        last_positive = i;
        if (u < acc) return i;
    }
    return last_positive;
}

}  // namespace sizeclust
