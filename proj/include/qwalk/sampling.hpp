#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace qwalk {

// Uniform double in [0, 1) from the top 53 bits. Same sequence on every platform,
// unlike std::uniform_real_distribution.
[[nodiscard]] inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Inverse-CDF sampler over nonnegative weights. Zero-weight entries are never drawn.
class DiscreteSampler {
public:
    explicit DiscreteSampler(std::span<const double> weights) : cumulative_(weights.size()) {
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            cumulative_[i] = acc;
            if (weights[i] > 0.0) last_positive_ = i;
        }
    }

    [[nodiscard]] double total() const noexcept { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

    [[nodiscard]] std::size_t operator()(std::mt19937_64& rng) const {
        const double u = uniform01(rng) * total();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        const auto idx = static_cast<std::size_t>(it - cumulative_.begin());
        return std::min(idx, last_positive_);
    }

private:
    std::vector<double> cumulative_;
    std::size_t last_positive_ = 0;
};

}  // namespace qwalk
