#include "sizeclust/composition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sizeclust/errors.hpp"

namespace sizeclust {

namespace {

std::vector<double> counts_of(std::span<const Label> a, int k) {
    if (k < 1) throw DomainError("closure: K must be at least 1");
    validate_assignment(a, k, "closure");
    std::vector<double> counts(static_cast<std::size_t>(k), 0.0);
    for (Label l : a) counts[static_cast<std::size_t>(l - 1)] += 1.0;
    return counts;
}

void check_pair(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw DomainError("aitchison: length mismatch (" + std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()) + ")");
    if (x.empty()) throw DomainError("aitchison: empty composition");
}

}  // namespace

Composition closure(std::span<const Label> a, int k) {
    auto counts = counts_of(a, k);
    const double n = static_cast<double>(a.size());
    for (double& c : counts) c /= n;
    return counts;
}

Composition closure_pseudo(std::span<const Label> a, int k, double delta) {
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw DomainError("closure_pseudo: delta must be >= 0");
    auto counts = counts_of(a, k);
    const double denom = static_cast<double>(a.size()) * (1.0 + delta);
    for (double& c : counts) c = (c + delta) / denom;
    return counts;
}

std::vector<double> clr(std::span<const double> x) {
    std::vector<double> out(x.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !std::isfinite(x[i]))
            throw DomainError("aitchison: part " + std::to_string(i + 1) +
                              " is not strictly positive; use closure_pseudo with delta > 0");
        out[i] = std::log(x[i]);
        mean += out[i];
    }
    mean /= static_cast<double>(x.size());
    for (double& v : out) v -= mean;
    return out;
}

double aitchison_distance(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    const auto cx = clr(x);
    const auto cy = clr(y);
    double ss = 0.0;
    for (std::size_t i = 0; i < cx.size(); ++i) {
        const double d = cx[i] - cy[i];
        ss += d * d;
    }
    return std::sqrt(ss);
}

PermutedDistance min_perm_aitchison(std::span<const double> eta, std::span<const double> c) {
    check_pair(eta, c);
    const int k = static_cast<int>(eta.size());
    if (k > kMaxPermutationLabels)
        throw ConfigError("min_perm_aitchison: exhaustive search over " + std::to_string(k) +
                          "! permutations refused (limit " + std::to_string(kMaxPermutationLabels) + ")");
    const auto ce = clr(eta);
    const auto cc = clr(c);

    LabelPermutation perm = identity_permutation(k);
    PermutedDistance best{std::numeric_limits<double>::infinity(), perm};
    do {
        double ss = 0.0;
        for (int i = 0; i < k; ++i) {
            const double d = ce[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)] - 1)] -
                             cc[static_cast<std::size_t>(i)];
            ss += d * d;
        }
        if (ss < best.distance) {
            best.distance = ss;
            best.best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    best.distance = std::sqrt(best.distance);
    return best;
}

double min_perm_aitchison_sorted(std::span<const double> eta, std::span<const double> c) {
    check_pair(eta, c);
    auto ce = clr(eta);
    auto cc = clr(c);
    std::sort(ce.begin(), ce.end());
    std::sort(cc.begin(), cc.end());
    double ss = 0.0;
    for (std::size_t i = 0; i < ce.size(); ++i) {
        const double d = ce[i] - cc[i];
        ss += d * d;
    }
    return std::sqrt(ss);
}

}  // namespace sizeclust
