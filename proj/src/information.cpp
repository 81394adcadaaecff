#include "sizeclust/information.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sizeclust/errors.hpp"

namespace sizeclust {

namespace {

void check_lengths(std::span<const Label> a, std::span<const Label> z) {
    if (a.size() != z.size())
        throw DomainError("length mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(z.size()));
    if (a.empty()) throw DomainError("empty assignment");
}

// -sum (c/N) log2 (c/N) over the given counts, summed in ascending count
// order so the result does not depend on how the labels are numbered
double entropy_of_counts(std::span<const long> counts, long total) {
    std::vector<long> sorted(counts.begin(), counts.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(total);
    double h = 0.0;
    for (long c : sorted) {
        if (c <= 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

}  // namespace

ContingencyTable::ContingencyTable(std::span<const Label> a, std::span<const Label> z, int ka, int kz) {
    check_lengths(a, z);
    rows_ = std::max(ka, max_label(a));
    cols_ = std::max(kz, max_label(z));
    validate_assignment(a, rows_, "contingency (a)");
    validate_assignment(z, cols_, "contingency (z)");
    total_ = static_cast<long>(a.size());
    counts_.assign(static_cast<std::size_t>(rows_ * cols_), 0);
    row_sums_.assign(static_cast<std::size_t>(rows_), 0);
    col_sums_.assign(static_cast<std::size_t>(cols_), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++counts_[static_cast<std::size_t>((a[i] - 1) * cols_ + (z[i] - 1))];
        ++row_sums_[static_cast<std::size_t>(a[i] - 1)];
        ++col_sums_[static_cast<std::size_t>(z[i] - 1)];
    }
}

ContingencyTable contingency(std::span<const Label> a, std::span<const Label> z) {
    return ContingencyTable(a, z);
}

double entropy(std::span<const Label> a) {
    if (a.empty()) throw DomainError("entropy: empty assignment");
    const int k = max_label(a);
    validate_assignment(a, k, "entropy");
    std::vector<long> counts(static_cast<std::size_t>(k), 0);
    for (Label l : a) ++counts[static_cast<std::size_t>(l - 1)];
    return entropy_of_counts(counts, static_cast<long>(a.size()));
}

double joint_entropy(std::span<const Label> a, std::span<const Label> z) {
    const ContingencyTable t(a, z);
    return entropy_of_counts(t.counts(), t.total());
}

double vi_loss(std::span<const Label> a, std::span<const Label> z) {
    const ContingencyTable t(a, z);
    const double h_az = entropy_of_counts(t.counts(), t.total());
    const double h_a = entropy_of_counts(t.row_sums(), t.total());
    const double h_z = entropy_of_counts(t.col_sums(), t.total());
    return std::max(0.0, 2.0 * h_az - (h_a + h_z));
}

}  // namespace sizeclust
