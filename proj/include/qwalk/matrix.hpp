#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace qwalk {

using cplx = std::complex<double>;

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

template <typename T>
constexpr T conj_value(const T& v) {
    if constexpr (is_complex<T>::value) {
        return std::conj(v);
    } else {
        return v;
    }
}

// Row-major dense matrix. Small sizes only (coins, collapsed operators).
template <typename T>
class DenseMatrix {
public:
    using value_type = T;

    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols) : rows_{rows}, cols_{cols}, data_(rows * cols) {}

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    [[nodiscard]] std::span<const T> data() const noexcept { return data_; }
    [[nodiscard]] std::span<T> data() noexcept { return data_; }

    template <typename U>
    [[nodiscard]] auto apply(std::span<const U> x) const {
        using R = std::common_type_t<T, U>;
        if (x.size() != cols_) throw std::invalid_argument("DenseMatrix::apply: dimension mismatch");
        std::vector<R> y(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            R acc{};
            for (std::size_t c = 0; c < cols_; ++c) acc += R((*this)(r, c)) * R(x[c]);
            y[r] = acc;
        }
        return y;
    }

    friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("DenseMatrix product: dimension mismatch");
        DenseMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T aik = a(i, k);
                if (aik == T{}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

// max_ij |(M^dagger M - I)_ij|
template <typename T>
[[nodiscard]] double unitarity_residual(const DenseMatrix<T>& m) {
    if (!m.square()) return INFINITY;
    const std::size_t n = m.rows();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            T acc{};
            for (std::size_t k = 0; k < n; ++k) acc += conj_value(m(k, i)) * m(k, j);
            if (i == j) acc -= T{1};
            worst = std::max(worst, static_cast<double>(std::abs(acc)));
        }
    return worst;
}

template <typename T>
[[nodiscard]] double max_abs_difference(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        worst = std::max(worst, static_cast<double>(std::abs(a.data()[i] - b.data()[i])));
    return worst;
}

namespace detail {

// Neumaier summation; the full space has n 2^n terms of equal size.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double t = sum + x;
        carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    [[nodiscard]] double value() const { return sum + carry; }
};

}  // namespace detail

// <a|b> with a conjugated.
[[nodiscard]] inline cplx inner_product(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw std::invalid_argument("inner_product: dimension mismatch");
    detail::CompensatedSum re, im;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const cplx z = std::conj(a[i]) * b[i];
        re.add(z.real());
        im.add(z.imag());
    }
    return {re.value(), im.value()};
}

[[nodiscard]] inline double norm_squared(std::span<const cplx> v) {
    double acc = 0.0;
    for (const auto& z : v) acc += std::norm(z);
    return acc;
}

[[nodiscard]] inline double max_abs_difference(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) return INFINITY;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace qwalk
