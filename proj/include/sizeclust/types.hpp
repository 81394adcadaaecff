#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sizeclust {

// Cluster labels are 1-based throughout the public API.
using Label = int;

// Length-N vector of labels in {1..K}. Used both for candidate actions and
// for posterior draws of the true assignment.
using Assignment = std::vector<Label>;

// Positive vector over cluster labels. Need not sum to one.
using Composition = std::vector<double>;

// Bijection on {1..K}, stored as images: perm[i-1] = sigma(i).
using LabelPermutation = std::vector<Label>;

// Checks every label lies in {1..k}; throws DomainError otherwise.
void validate_assignment(std::span<const Label> a, int k, const char* what = "assignment");

// Largest label present (0 for an empty span).
Label max_label(std::span<const Label> a);

// True when perm is a bijection on {1..perm.size()}.
bool is_permutation(std::span<const Label> perm);

LabelPermutation identity_permutation(int k);

// Relabels to first-appearance order: the first distinct label seen becomes 1,
// the next 2, and so on. Two assignments inducing the same partition map to
// the same canonical vector.
Assignment canonical_labels(std::span<const Label> a);

}  // namespace sizeclust
