#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace sizeclust {

using Rng = std::mt19937_64;

// Mixes a base seed with a stream tag so independent streams (chains,
// optimizer, simulator, replicates) never share state.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Draws from Dirichlet(concentration) into out. Shapes below one are drawn in
// log space; the result is strictly inside the simplex (no exact zeros).
void sample_dirichlet(std::span<const double> concentration, Rng& rng, std::span<double> out);

// Returns a 0-based index with probability proportional to weights.
// Weights must be non-negative with a positive sum.
std::size_t sample_categorical(std::span<const double> weights, Rng& rng);

double uniform01(Rng& rng);

}  // namespace sizeclust
