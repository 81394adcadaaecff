#include "sizeclust/types.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "sizeclust/errors.hpp"

namespace sizeclust {

void validate_assignment(std::span<const Label> a, int k, const char* what) {
    if (a.empty()) throw DomainError(std::string(what) + ": empty assignment");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 1 || a[i] > k) {
            throw DomainError(std::string(what) + ": label " + std::to_string(a[i]) + " at position " +
                              std::to_string(i + 1) + " outside 1.." + std::to_string(k));
        }
    }
}

Label max_label(std::span<const Label> a) {
    Label m = 0;
    for (Label l : a) m = std::max(m, l);
    return m;
}

bool is_permutation(std::span<const Label> perm) {
    std::vector<char> seen(perm.size(), 0);
    for (Label l : perm) {
        if (l < 1 || static_cast<std::size_t>(l) > perm.size() || seen[static_cast<std::size_t>(l - 1)]) return false;
        seen[static_cast<std::size_t>(l - 1)] = 1;
    }
    return true;
}

LabelPermutation identity_permutation(int k) {
    LabelPermutation p(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) p[static_cast<std::size_t>(i)] = i + 1;
    return p;
}

Assignment canonical_labels(std::span<const Label> a) {
    std::unordered_map<Label, Label> map;
    Assignment out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto [it, inserted] = map.try_emplace(a[i], static_cast<Label>(map.size() + 1));
        out[i] = it->second;
    }
    return out;
}

}  // namespace sizeclust
