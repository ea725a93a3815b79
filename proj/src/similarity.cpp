#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <vector>

#include "kcn/normalizer.hpp"

namespace kcn {
namespace {

// Bit-parallel LCS (Allison-Dix / Hyyro): one machine word holds the DP
// column for a pattern of up to 64 bytes.
std::size_t lcs_bitparallel(std::string_view pattern, std::string_view text) {
    std::array<std::uint64_t, 256> masks{};
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        masks[static_cast<unsigned char>(pattern[i])] |= std::uint64_t{1} << i;
    }
    std::uint64_t v = ~std::uint64_t{0};
    for (char c : text) {
        const std::uint64_t u = v & masks[static_cast<unsigned char>(c)];
        v = (v + u) | (v - u);
    }
    const std::uint64_t used =
        pattern.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << pattern.size()) - 1;
    return static_cast<std::size_t>(std::popcount(~v & used));
}

std::size_t lcs_table(std::string_view a, std::string_view b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (char ca : a) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = ca == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

}  // namespace

std::size_t lcs_length(std::string_view a, std::string_view b) {
    if (a.empty() || b.empty()) return 0;
    if (a.size() > b.size()) std::swap(a, b);
    if (a.size() <= 64) return lcs_bitparallel(a, b);
    return lcs_table(a, b);
}

SimilarityScore similarity(std::string_view a, std::string_view b) {
    const std::size_t total = a.size() + b.size();
    if (total == 0) return {100.0};
    if (a == b) return {100.0};
    const double indel = static_cast<double>(total - 2 * lcs_length(a, b));
    return {100.0 * (1.0 - indel / static_cast<double>(total))};
}

}  // namespace kcn
