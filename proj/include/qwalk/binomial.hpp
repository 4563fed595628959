#pragma once

#include <cmath>
#include <limits>

namespace qwalk {

// log C(n, k); -inf outside 0 <= k <= n.
[[nodiscard]] inline double log_binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return -std::numeric_limits<double>::infinity();
    if (k == 0 || k == n) return 0.0;
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

[[nodiscard]] inline double binomial(int n, int k) {
    return std::exp(log_binomial(n, k));
}

// sqrt(C(n, k) / 2^m), evaluated in log space so it stays finite for large n.
[[nodiscard]] inline double sqrt_binomial_over_pow2(int n, int k, int m) {
    return std::exp(0.5 * (log_binomial(n, k) - m * std::log(2.0)));
}

}  // namespace qwalk
