#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sizeclust/types.hpp"

namespace sizeclust {

enum class LossMode { sensitive, invariant };

LossMode parse_loss_mode(std::string_view s);
std::string to_string(LossMode mode);

/// Configuration of the size-constrained loss.
///
/// eta has K_target = eta.size() parts; candidate actions use labels
/// {1..K_target} while posterior draws may use the full {1..k}. With
/// K_target < k the size term pushes model clusters to merge.
struct LossSpec {
    LossMode mode = LossMode::sensitive;
    Composition eta;
    double lambda = 1.0;
    double delta = 0.1;
    int k = 0;

    int target_labels() const noexcept { return static_cast<int>(eta.size()); }

    /// True when the whole loss is unchanged by relabelling the action:
    /// invariant mode, lambda = 0, or an eta with all parts equal.
    bool label_invariant() const;

    /// Throws DomainError / ConfigError on inconsistent settings.
    void validate() const;

    /// Uniform target over k labels with the default lambda and delta.
    static LossSpec uniform(int k, LossMode mode = LossMode::sensitive);
};

/// The lambda-free size penalty: d_A(eta, C(a, delta)) in sensitive mode,
/// min over sigma of d_A(eta_sigma, C(a, delta)) in invariant mode.
/// Throws DomainError when delta = 0 and a leaves a target group empty.
double size_penalty(std::span<const Label> a, const LossSpec& spec);

double loss_sensitive(std::span<const Label> a, std::span<const Label> z, const LossSpec& spec);
double loss_invariant(std::span<const Label> a, std::span<const Label> z, const LossSpec& spec);

/// Dispatches on spec.mode.
double loss(std::span<const Label> a, std::span<const Label> z, const LossSpec& spec);

/// Monte-Carlo posterior expected loss (1/T) sum_t L(a, z_t). The size term
/// does not depend on z and is added once to the mean VI.
double expected_loss(std::span<const Label> a, std::span<const Assignment> draws, const LossSpec& spec);

/// Mean VI term alone; expected_loss = expected_vi + lambda * size_penalty.
double expected_vi(std::span<const Label> a, std::span<const Assignment> draws);

}  // namespace sizeclust
