#pragma once

#include <span>
#include <vector>

#include "sizeclust/types.hpp"

namespace sizeclust {

// K_a x K_z table of co-occurrence counts between two assignments.
// Dimensions default to the largest label present in each input.
class ContingencyTable {
public:
    ContingencyTable(std::span<const Label> a, std::span<const Label> z, int ka = 0, int kz = 0);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    long total() const noexcept { return total_; }

    // 1-based, matching the label convention.
    long count(int g, int h) const { return counts_[static_cast<std::size_t>((g - 1) * cols_ + (h - 1))]; }
    long row_sum(int g) const { return row_sums_[static_cast<std::size_t>(g - 1)]; }
    long col_sum(int h) const { return col_sums_[static_cast<std::size_t>(h - 1)]; }

    std::span<const long> counts() const noexcept { return counts_; }
    std::span<const long> row_sums() const noexcept { return row_sums_; }
    std::span<const long> col_sums() const noexcept { return col_sums_; }

private:
    int rows_;
    int cols_;
    long total_;
    std::vector<long> counts_;
    std::vector<long> row_sums_;
    std::vector<long> col_sums_;
};

ContingencyTable contingency(std::span<const Label> a, std::span<const Label> z);

// Entropies in bits, with 0 log 0 = 0.
double entropy(std::span<const Label> a);
double joint_entropy(std::span<const Label> a, std::span<const Label> z);

// Variation of information 2H(a,z) - H(a) - H(z), in bits. Clamped at zero
// to absorb rounding when the partitions coincide.
double vi_loss(std::span<const Label> a, std::span<const Label> z);

}  // namespace sizeclust
