#pragma once

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qwalk/matrix.hpp"

namespace qwalk {

// Bad input: invalid dimension, index out of range, mismatched sizes, unsupported n.
class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Requested state does not fit under the configured memory cap.
class capacity_error : public usage_error {
public:
    using usage_error::usage_error;
};

// Solver non-convergence or a structural result that contradicts the analysis.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int default_max_full_dimension = 20;
// n * 2^n amplitudes must stay addressable regardless of the override.
inline constexpr int hard_max_full_dimension = 40;

// Largest n accepted by the full-space simulator. QWALK_MAX_N overrides the default.
[[nodiscard]] inline int max_full_dimension() {
    int cap = default_max_full_dimension;
    if (const char* env = std::getenv("QWALK_MAX_N"); env != nullptr) {
        std::string_view text{env};
        int value = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec == std::errc{} && ptr == text.data() + text.size() && value >= 2) cap = value;
    }
    return cap < hard_max_full_dimension ? cap : hard_max_full_dimension;
}

inline void require_full_capacity(int n) {
    const int cap = max_full_dimension();
    if (n > cap) {
        throw capacity_error("n = " + std::to_string(n) + " exceeds the full-space memory cap of n = " +
                             std::to_string(cap) + " (set QWALK_MAX_N to raise it)");
    }
}

enum class MarkingCoinKind { MinusIdentity, Custom };

struct MarkingCoin {
    MarkingCoinKind kind = MarkingCoinKind::MinusIdentity;
    DenseMatrix<cplx> matrix;  // used only when kind == Custom

    static MarkingCoin minus_identity() { return {}; }
    static MarkingCoin custom(DenseMatrix<cplx> m) { return {MarkingCoinKind::Custom, std::move(m)}; }
};

struct WalkConfig {
    int n = 2;
    std::uint64_t target = 0;
    MarkingCoin marking_coin;
    double tol = 1e-9;
    std::uint64_t seed = 0;

    void validate() const {
        if (n < 2) throw usage_error("walk dimension must satisfy n >= 2, got " + std::to_string(n));
        if (n > 62) throw usage_error("walk dimension n = " + std::to_string(n) + " is not representable");
        if (target >= (std::uint64_t{1} << n))
            throw usage_error("target " + std::to_string(target) + " is not a node of the " + std::to_string(n) +
                              "-cube");
        if (!(tol >= 0.0)) throw usage_error("tolerance must be nonnegative");
        if (marking_coin.kind == MarkingCoinKind::Custom) {
            const auto& m = marking_coin.matrix;
            if (m.rows() != static_cast<std::size_t>(n) || m.cols() != static_cast<std::size_t>(n))
                throw usage_error("custom marking coin must be n x n");
            if (unitarity_residual(m) > tol) throw usage_error("custom marking coin is not unitary within tol");
        }
    }
};

}  // namespace qwalk
