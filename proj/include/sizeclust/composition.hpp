#pragma once

#include <span>

#include "sizeclust/types.hpp"

namespace sizeclust {

/// Largest number of parts accepted by exhaustive permutation searches.
inline constexpr int kMaxPermutationLabels = 10;

/// Relative group sizes of an assignment: (count of label k) / N, k = 1..K.
/// Throws DomainError for an empty assignment or a label outside {1..K}.
Composition closure(std::span<const Label> a, int k);

/// Pseudo-count closure ((count_k + delta) / (N (1 + delta)))_k.
///
/// The denominator is N(1 + delta) rather than N + K delta, so the parts do
/// not sum to one unless K = N. Every consumer goes through the Aitchison
/// distance, which is invariant to positive scaling, so the normalisation
/// has no effect on any loss value.
Composition closure_pseudo(std::span<const Label> a, int k, double delta);

/// Aitchison distance sqrt((1/2D) sum_ij (ln(x_i/x_j) - ln(y_i/y_j))^2).
/// Evaluated through centred log-ratios, which is algebraically identical.
/// Both inputs must have the same length and strictly positive parts.
double aitchison_distance(std::span<const double> x, std::span<const double> y);

struct PermutedDistance {
    double distance;
    LabelPermutation best;  // best[i-1] = sigma(i); target is permuted as eta_sigma
};

/// min over sigma of d_A(eta_sigma, c) where eta_sigma = (eta_sigma(1), ..., eta_sigma(K)).
/// Exhaustive over all K! permutations in lexicographic order; the first
/// minimiser wins ties. Rejects K > kMaxPermutationLabels with ConfigError.
PermutedDistance min_perm_aitchison(std::span<const double> eta, std::span<const double> c);

/// Same minimum as min_perm_aitchison computed in O(K log K): the squared
/// distance is |clr(eta)|^2 + |clr(c)|^2 - 2 <clr(eta)_sigma, clr(c)>, and the
/// inner product is maximised by pairing both vectors in sorted order.
/// Has no upper limit on K.
double min_perm_aitchison_sorted(std::span<const double> eta, std::span<const double> c);

/// Centred log-ratio transform. All parts must be strictly positive.
std::vector<double> clr(std::span<const double> x);

}  // namespace sizeclust
