#pragma once

// The walk restricted to the bit-swap-symmetric subspace: a walk on the line x = 0..n
// (x is the Hamming distance from the marked node) with two chiralities.
//
//   |R,x>  coin points away from the marked node (x_d = 0), x = 0..n-1
//   |L,x>  coin points toward it (x_d = 1),                  x = 1..n
//
// Layout [R0, L1, R1, L2, ..., R(n-1), Ln]: R,x at 2x and L,x at 2x-1. With this
// interleaving every nonzero of U and U' sits within two diagonals of the main one.

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qwalk/binomial.hpp"
#include "qwalk/config.hpp"
#include "qwalk/format.hpp"
#include "qwalk/full_state.hpp"
#include "qwalk/matrix.hpp"

namespace qwalk {

[[nodiscard]] constexpr std::size_t r_index(int x) noexcept { return 2 * static_cast<std::size_t>(x); }
[[nodiscard]] constexpr std::size_t l_index(int x) noexcept { return 2 * static_cast<std::size_t>(x) - 1; }

class CollapsedState {
public:
    CollapsedState(int n, std::vector<cplx> amps) : n_{n}, amps_{std::move(amps)} {
        if (n < 2) throw usage_error("CollapsedState: n must be >= 2");
        if (amps_.size() != 2 * static_cast<std::size_t>(n))
            throw usage_error("CollapsedState: expected 2n amplitudes");
    }

    static CollapsedState zero(int n) {
        if (n < 2) throw usage_error("CollapsedState: n must be >= 2");
        return {n, std::vector<cplx>(2 * static_cast<std::size_t>(n))};
    }

    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }

    cplx& r(int x) noexcept { return amps_[r_index(x)]; }
    const cplx& r(int x) const noexcept { return amps_[r_index(x)]; }
    cplx& l(int x) noexcept { return amps_[l_index(x)]; }
    const cplx& l(int x) const noexcept { return amps_[l_index(x)]; }

    [[nodiscard]] std::span<const cplx> amps() const noexcept { return amps_; }
    [[nodiscard]] std::span<cplx> amps() noexcept { return amps_; }
    [[nodiscard]] double norm() const { return std::sqrt(norm_squared(amps_)); }

    friend bool operator==(const CollapsedState&, const CollapsedState&) = default;

private:
    int n_;
    std::vector<cplx> amps_;
};

[[nodiscard]] inline cplx dot(const CollapsedState& a, const CollapsedState& b) {
    return inner_product(a.amps(), b.amps());
}

// cos(omega_x) = 1 - 2x/n, sin(omega_x) = (2/n) sqrt(x (n - x))
[[nodiscard]] inline double cos_omega(int n, int x) { return 1.0 - 2.0 * x / n; }
[[nodiscard]] inline double sin_omega(int n, int x) {
    return 2.0 / n * std::sqrt(static_cast<double>(x) * (n - x));
}

/// psi_0 in the collapsed basis: sqrt(C(n-1, x)/2^n) on R,x and sqrt(C(n-1, x-1)/2^n) on L,x.
[[nodiscard]] inline CollapsedState collapsed_initial_state(int n) {
    CollapsedState s = CollapsedState::zero(n);
    for (int x = 0; x < n; ++x) s.r(x) = sqrt_binomial_over_pow2(n - 1, x, n);
    for (int x = 1; x <= n; ++x) s.l(x) = sqrt_binomial_over_pow2(n - 1, x - 1, n);
    return s;
}

struct Psi1 {
    CollapsedState state;
    double c;  // normalization, c^2 = sum_{x < n/2} 1 / C(n-1, x)
};

[[nodiscard]] inline double psi1_normalization_squared(int n) {
    double c2 = 0.0;
    for (int x = 0; x < n / 2; ++x) c2 += std::exp(-log_binomial(n - 1, x));
    return c2;
}

/// The companion state concentrated near the marked node. Only defined for even n >= 4.
[[nodiscard]] inline Psi1 psi1_state(int n) {
    if (n < 4 || n % 2 != 0)
        throw usage_error("psi1_state: unsupported dimension n = " + std::to_string(n) + " (requires even n >= 4)");
    const double c = std::sqrt(psi1_normalization_squared(n));
    CollapsedState s = CollapsedState::zero(n);
    for (int x = 0; x < n / 2; ++x) {
        const double a = std::exp(-0.5 * (std::log(2.0) + log_binomial(n - 1, x))) / c;
        s.r(x) = a;
        s.l(x + 1) = -a;
    }
    return {std::move(s), c};
}

enum class OperatorStorage { Auto, Dense, Banded };

inline constexpr int dense_operator_max_n = 64;

/// Collapsed U (or U' = U - 2|L,1><R,0|) as a real 2n x 2n orthogonal matrix.
class CollapsedOperator {
public:
    static constexpr int bandwidth = 2;  // nonzeros satisfy |row - col| <= 2

    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] std::size_t dim() const noexcept { return 2 * static_cast<std::size_t>(n_); }
    [[nodiscard]] bool perturbed() const noexcept { return perturbed_; }
    [[nodiscard]] OperatorStorage storage() const noexcept { return storage_; }

    [[nodiscard]] double operator()(std::size_t row, std::size_t col) const noexcept {
        if (storage_ == OperatorStorage::Dense) return dense_(row, col);
        const auto off = static_cast<long long>(row) - static_cast<long long>(col);
        if (off < -bandwidth || off > bandwidth) return 0.0;
        return band_[static_cast<std::size_t>(off + bandwidth) * dim() + col];
    }

    [[nodiscard]] std::vector<cplx> apply(std::span<const cplx> x) const {
        if (x.size() != dim()) throw usage_error("CollapsedOperator::apply: dimension mismatch");
        const auto d = static_cast<long long>(dim());
        std::vector<cplx> y(dim());
        if (storage_ == OperatorStorage::Dense) {
            for (long long r = 0; r < d; ++r) {
                cplx acc{};
                for (long long c = 0; c < d; ++c) acc += dense_(r, c) * x[c];
                y[r] = acc;
            }
            return y;
        }
        // Same per-row summation order as the dense path (ascending column), so both
        // storages agree bit for bit.
        for (long long r = 0; r < d; ++r) {
            cplx acc{};
            for (long long c = std::max(0LL, r - bandwidth); c <= std::min(d - 1, r + bandwidth); ++c)
                acc += band_[static_cast<std::size_t>(r - c + bandwidth) * dim() + c] * x[c];
            y[r] = acc;
        }
        return y;
    }

    [[nodiscard]] DenseMatrix<double> to_dense() const {
        if (storage_ == OperatorStorage::Dense) return dense_;
        DenseMatrix<double> m(dim(), dim());
        for (std::size_t r = 0; r < dim(); ++r)
            for (std::size_t c = 0; c < dim(); ++c) m(r, c) = (*this)(r, c);
        return m;
    }

    friend CollapsedOperator build_collapsed_unitary(int n, bool perturbed, OperatorStorage storage);

private:
    CollapsedOperator(int n, bool perturbed, OperatorStorage storage)
        : n_{n}, perturbed_{perturbed}, storage_{storage} {
        if (storage_ == OperatorStorage::Dense)
            dense_ = DenseMatrix<double>(dim(), dim());
        else
            band_.assign((2 * bandwidth + 1) * dim(), 0.0);
    }

    void set(std::size_t row, std::size_t col, double v) {
        if (storage_ == OperatorStorage::Dense)
            dense_(row, col) = v;
        else
            band_[static_cast<std::size_t>(static_cast<long long>(row) - static_cast<long long>(col) + bandwidth) *
                      dim() +
                  col] = v;
    }

    int n_;
    bool perturbed_;
    OperatorStorage storage_;
    DenseMatrix<double> dense_;
    std::vector<double> band_;  // band_[(row - col + 2) * dim + col]
};

/// Column by column: U|R,x> = cos w_x |L,x+1> + sin w_x |R,x-1>,
///                   U|L,x> = sin w_x |L,x+1> - cos w_x |R,x-1>.
/// Perturbed: the marking coin -I at node 0 flips the sign of <L,1|U|R,0>.
[[nodiscard]] inline CollapsedOperator build_collapsed_unitary(int n, bool perturbed,
                                                               OperatorStorage storage = OperatorStorage::Auto) {
    if (n < 2) throw usage_error("build_collapsed_unitary: n must be >= 2");
    if (storage == OperatorStorage::Auto)
        storage = n <= dense_operator_max_n ? OperatorStorage::Dense : OperatorStorage::Banded;
    CollapsedOperator op(n, perturbed, storage);
    for (int x = 0; x < n; ++x) {
        op.set(l_index(x + 1), r_index(x), cos_omega(n, x));
        if (x >= 1) op.set(r_index(x - 1), r_index(x), sin_omega(n, x));
    }
    for (int x = 1; x <= n; ++x) {
        if (x + 1 <= n) op.set(l_index(x + 1), l_index(x), sin_omega(n, x));
        op.set(r_index(x - 1), l_index(x), -cos_omega(n, x));
    }
    if (perturbed) op.set(l_index(1), r_index(0), -cos_omega(n, 0));
    return op;
}

[[nodiscard]] inline CollapsedState collapsed_step(const CollapsedState& s, const CollapsedOperator& op) {
    if (s.n() != op.n()) throw usage_error("collapsed_step: dimension mismatch");
    return {s.n(), op.apply(s.amps())};
}

[[nodiscard]] inline CollapsedState collapsed_evolve(CollapsedState s, const CollapsedOperator& op, long long t) {
    if (t < 0) throw usage_error("collapsed_evolve: step count must be nonnegative");
    for (long long i = 0; i < t; ++i) s = collapsed_step(s, op);
    return s;
}

/// Projection onto the symmetric basis, with distances measured from `target`.
[[nodiscard]] inline CollapsedState collapse(const FullState& s, std::uint64_t target = 0) {
    const int n = s.n();
    if (n < 2) throw usage_error("collapse: n must be >= 2");
    if (target >= s.nodes()) throw usage_error("collapse: target out of range");
    CollapsedState out = CollapsedState::zero(n);
    for (std::uint64_t x = 0; x < s.nodes(); ++x) {
        const std::uint64_t rel = x ^ target;
        const int w = std::popcount(rel);
        for (int d = 0; d < n; ++d) {
            if (((rel >> d) & 1U) == 0)
                out.r(w) += s(d, x);
            else
                out.l(w) += s(d, x);
        }
    }
    for (int w = 0; w < n; ++w) out.r(w) *= std::exp(-0.5 * (std::log(n - w) + log_binomial(n, w)));
    for (int w = 1; w <= n; ++w) out.l(w) *= std::exp(-0.5 * (std::log(w) + log_binomial(n, w)));
    return out;
}

/// Probability of measuring the marked node: it is reached only through |R,0>.
[[nodiscard]] inline double marked_probability(const CollapsedState& s, double tol = 1e-9) {
    const double total = norm_squared(s.amps());
    if (std::abs(total - 1.0) > tol)
        throw usage_error("marked_probability: state is not normalized (norm^2 = " + std::to_string(total) + ")");
    return std::norm(s.r(0));
}

/// Bit-swap-symmetric eigenvector of the unperturbed walk: the normalized equal
/// superposition of Fourier modes with |k| = k, projected onto the collapsed basis.
/// Built through the full space, so n is limited by the full-space cap.
[[nodiscard]] inline CollapsedState symmetric_eigenvector(int n, int k, int sign) {
    if (k < 0 || k > n) throw usage_error("symmetric_eigenvector: k out of range");
    FullState sum = FullState::zero(n);
    for (std::uint64_t kb = 0; kb < sum.nodes(); ++kb) {
        if (std::popcount(kb) != k) continue;
        const FullState v = fourier_eigenvector(n, kb, sign);
        for (std::size_t i = 0; i < sum.size(); ++i) sum.amps()[i] += v.amps()[i];
    }
    CollapsedState c = collapse(sum);
    const double nrm = c.norm();
    for (auto& z : c.amps()) z /= nrm;
    return c;
}

inline void to_json(nlohmann::json& j, const CollapsedState& s) {
    auto amps = nlohmann::json::array();
    for (const auto& z : s.amps()) amps.push_back({z.real(), z.imag()});
    j = nlohmann::json{{"n", s.n()}, {"layout", "R0,L1,R1,...,R(n-1),Ln"}, {"amps", std::move(amps)}};
}

inline void to_json(nlohmann::json& j, const CollapsedOperator& op) {
    auto rows = nlohmann::json::array();
    for (std::size_t r = 0; r < op.dim(); ++r) {
        auto row = nlohmann::json::array();
        for (std::size_t c = 0; c < op.dim(); ++c) row.push_back(op(r, c));
        rows.push_back(std::move(row));
    }
    j = nlohmann::json{{"n", op.n()}, {"perturbed", op.perturbed()}, {"matrix", std::move(rows)}};
}

/// Sparse CSV export (row, col, value) of the nonzero entries.
[[nodiscard]] inline std::string operator_csv(const CollapsedOperator& op) {
    std::ostringstream out;
    out << "#schema=qwalk-collapsed-operator/1\n";
    out << "row,col,value\n";
    for (std::size_t r = 0; r < op.dim(); ++r)
        for (std::size_t c = 0; c < op.dim(); ++c)
            if (const double v = op(r, c); v != 0.0) out << r << ',' << c << ',' << format_double(v) << '\n';
    return out.str();
}

}  // namespace qwalk
