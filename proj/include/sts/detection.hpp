#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sts {

/// Hard-decision detector output: for each OFDM symbol, the sorted set of
/// subcarrier indices whose combined energy crossed the threshold.
struct DetectionGrid {
    std::size_t subcarriers = 0;
    std::vector<std::vector<std::uint32_t>> symbols;

    std::size_t symbol_count() const noexcept { return symbols.size(); }

    /// Total number of detections across all symbols.
    std::size_t total() const noexcept
    {
        std::size_t n = 0;
        for (const auto& s : symbols)
            n += s.size();
        return n;
    }
};

} // namespace sts
