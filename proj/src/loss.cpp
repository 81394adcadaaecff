#include "sizeclust/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sizeclust/composition.hpp"
#include "sizeclust/errors.hpp"
#include "sizeclust/information.hpp"

namespace sizeclust {

LossMode parse_loss_mode(std::string_view s) {
    if (s == "sensitive" || s == "lss") return LossMode::sensitive;
    if (s == "invariant" || s == "lsi") return LossMode::invariant;
    throw ConfigError("unknown loss mode '" + std::string(s) + "' (expected sensitive or invariant)");
}

std::string to_string(LossMode mode) {
    return mode == LossMode::sensitive ? "sensitive" : "invariant";
}

bool LossSpec::label_invariant() const {
    if (mode == LossMode::invariant || lambda == 0.0) return true;
    if (eta.empty()) return true;
    const auto [lo, hi] = std::minmax_element(eta.begin(), eta.end());
    return *hi - *lo <= 1e-12 * *hi;
}

void LossSpec::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("loss: lambda must be >= 0");
    if (!(delta >= 0.0) || delta > 1.0) throw DomainError("loss: delta must lie in [0, 1]");
    if (eta.empty()) throw DomainError("loss: eta is empty");
    for (double e : eta)
        if (!(e > 0.0) || !std::isfinite(e)) throw DomainError("loss: eta parts must be strictly positive");
    if (k < 1) throw DomainError("loss: K must be at least 1");
    if (target_labels() > k)
        throw DomainError("loss: eta has " + std::to_string(eta.size()) + " parts but the model has K = " +
                          std::to_string(k));
    if (mode == LossMode::invariant && target_labels() > kMaxPermutationLabels)
        throw ConfigError("loss: invariant mode needs K_target <= " + std::to_string(kMaxPermutationLabels));
}

LossSpec LossSpec::uniform(int k, LossMode mode) {
    LossSpec spec;
    spec.mode = mode;
    spec.k = k;
    spec.eta.assign(static_cast<std::size_t>(k), 1.0 / k);
    return spec;
}

double size_penalty(std::span<const Label> a, const LossSpec& spec) {
    spec.validate();
    const Composition c = closure_pseudo(a, spec.target_labels(), spec.delta);
    if (spec.delta == 0.0 && std::any_of(c.begin(), c.end(), [](double v) { return v <= 0.0; }))
        throw DomainError("loss: assignment leaves a target group empty; use delta > 0");
    if (spec.mode == LossMode::sensitive) return aitchison_distance(spec.eta, c);
    return min_perm_aitchison(spec.eta, c).distance;
}

namespace {

double single_draw_loss(std::span<const Label> a, std::span<const Label> z, const LossSpec& spec) {
    spec.validate();
    validate_assignment(a, spec.target_labels(), "action");
    validate_assignment(z, spec.k, "draw");
    const double vi = vi_loss(a, z);
    if (spec.lambda == 0.0) return vi;
    return vi + spec.lambda * size_penalty(a, spec);
}

}  // namespace

double loss_sensitive(std::span<const Label> a, std::span<const Label> z, const LossSpec& spec) {
    if (spec.mode != LossMode::sensitive) throw DomainError("loss_sensitive: spec.mode is not sensitive");
    return single_draw_loss(a, z, spec);
}

double loss_invariant(std::span<const Label> a, std::span<const Label> z, const LossSpec& spec) {
    if (spec.mode != LossMode::invariant) throw DomainError("loss_invariant: spec.mode is not invariant");
    return single_draw_loss(a, z, spec);
}

double loss(std::span<const Label> a, std::span<const Label> z, const LossSpec& spec) {
    return spec.mode == LossMode::sensitive ? loss_sensitive(a, z, spec) : loss_invariant(a, z, spec);
}

double expected_vi(std::span<const Label> a, std::span<const Assignment> draws) {
    if (draws.empty()) throw DomainError("expected_loss: no posterior draws");
    double total = 0.0;
    for (const auto& z : draws) total += vi_loss(a, z);
    return total / static_cast<double>(draws.size());
}

double expected_loss(std::span<const Label> a, std::span<const Assignment> draws, const LossSpec& spec) {
    spec.validate();
    if (draws.empty()) throw DomainError("expected_loss: no posterior draws");
    validate_assignment(a, spec.target_labels(), "action");
    for (const auto& z : draws) validate_assignment(z, spec.k, "draw");
    const double vi = expected_vi(a, draws);
    if (spec.lambda == 0.0) return vi;
    return vi + spec.lambda * size_penalty(a, spec);
}

}  // namespace sizeclust
