#pragma once

// Eigenstructure of the collapsed walk operators and the quantities that drive the search:
// the pair of perturbed eigenvalues e^{+-i omega'_0} near 1, their overlaps with psi_0 and
// psi_1, and the relative phase between those overlaps.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "qwalk/binomial.hpp"
#include "qwalk/collapsed.hpp"
#include "qwalk/config.hpp"
#include "qwalk/fixtures.hpp"
#include "qwalk/matrix.hpp"

namespace qwalk {

inline constexpr double default_tol_eig = 1e-9;

struct EigenPair {
    cplx value;
    std::vector<cplx> vector;  // unit norm
    double residual = 0.0;     // ||M v - value v||

    // Angle in (-pi, pi].
    [[nodiscard]] double angle() const { return std::arg(value); }
};

namespace detail {

inline double sort_angle(cplx z, double tol) {
    const double a = std::arg(z);
    return a <= -std::numbers::pi + tol ? std::numbers::pi : a;
}

}  // namespace detail

/// Full eigendecomposition of a real orthogonal matrix.
///
/// Pairs come back sorted by angle in (-pi, pi], ties broken by the imaginary part.
/// Every pair is checked against the residual contract, and the spectrum must be closed
/// under conjugation; `label` is used in error messages.
[[nodiscard]] inline std::vector<EigenPair> eigendecompose(const DenseMatrix<double>& m,
                                                           double tol_eig = default_tol_eig,
                                                           std::string_view label = "matrix") {
    if (!m.square() || m.rows() == 0) throw usage_error("eigendecompose: " + std::string(label) + " is not square");
    if (const double r = unitarity_residual(m); r > 1e-10)
        throw usage_error("eigendecompose: " + std::string(label) + " is not orthogonal (residual " +
                          std::to_string(r) + ")");

    const auto dim = static_cast<Eigen::Index>(m.rows());
    Eigen::MatrixXd a(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) a(r, c) = m(r, c);

    Eigen::EigenSolver<Eigen::MatrixXd> solver(a, true);
    if (solver.info() != Eigen::Success)
        throw numerical_error("eigensolver did not converge for " + std::string(label) + " (dimension " +
                              std::to_string(dim) + ")");

    std::vector<EigenPair> pairs;
    pairs.reserve(m.rows());
    for (Eigen::Index i = 0; i < dim; ++i) {
        EigenPair p;
        p.value = solver.eigenvalues()(i);
        Eigen::VectorXcd v = solver.eigenvectors().col(i);
        v.normalize();
        p.residual = (a.cast<cplx>() * v - p.value * v).norm();
        p.vector.assign(v.data(), v.data() + v.size());
        if (p.residual > tol_eig || std::abs(std::abs(p.value) - 1.0) > tol_eig)
            throw numerical_error("eigenpair of " + std::string(label) + " violates the residual contract (residual " +
                                  std::to_string(p.residual) + ")");
        pairs.push_back(std::move(p));
    }

    for (const auto& p : pairs) {
        const bool closed = std::any_of(pairs.begin(), pairs.end(), [&](const EigenPair& q) {
            return std::abs(q.value - std::conj(p.value)) <= tol_eig;
        });
        if (!closed) throw numerical_error("spectrum of " + std::string(label) + " is not closed under conjugation");
    }

    std::stable_sort(pairs.begin(), pairs.end(), [tol_eig](const EigenPair& x, const EigenPair& y) {
        const double ax = detail::sort_angle(x.value, tol_eig);
        const double ay = detail::sort_angle(y.value, tol_eig);
        if (ax != ay) return ax < ay;
        return x.value.imag() < y.value.imag();
    });
    return pairs;
}

// Re z > 1 - 2/(3n)
[[nodiscard]] inline double arc_threshold(int n) { return 1.0 - 2.0 / (3.0 * n); }

[[nodiscard]] inline bool on_arc(cplx z, int n) { return z.real() > arc_threshold(n); }

[[nodiscard]] inline std::vector<EigenPair> arc_members(const std::vector<EigenPair>& spectrum, int n) {
    std::vector<EigenPair> out;
    std::copy_if(spectrum.begin(), spectrum.end(), std::back_inserter(out),
                 [n](const EigenPair& p) { return on_arc(p.value, n); });
    return out;
}

/// e^{+-i omega_k} = 1 - 2k/n +- (2i/n) sqrt(k(n-k)); returns {plus, minus}.
[[nodiscard]] inline std::pair<cplx, cplx> unperturbed_eigenvalue(int n, int k) {
    if (n < 1) throw usage_error("unperturbed_eigenvalue: invalid dimension");
    if (k < 0 || k > n) throw usage_error("unperturbed_eigenvalue: k = " + std::to_string(k) + " out of range");
    const double re = 1.0 - 2.0 * k / n;
    const double im = 2.0 / n * std::sqrt(static_cast<double>(k) * (n - k));
    return {cplx(re, im), cplx(re, -im)};
}

/// For a degenerate real eigenspace spanned by a and b, a unit vector v in the span with
/// <conj(v)|v> = 0, so v and conj(v) play the roles of the conjugate eigenvector pair.
[[nodiscard]] inline std::vector<cplx> conjugate_pair_basis(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw usage_error("conjugate_pair_basis: dimension mismatch");
    std::vector<std::vector<double>> candidates(4, std::vector<double>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        candidates[0][i] = a[i].real();
        candidates[1][i] = a[i].imag();
        candidates[2][i] = b[i].real();
        candidates[3][i] = b[i].imag();
    }
    std::vector<std::vector<double>> basis;
    for (auto& v : candidates) {
        for (const auto& q : basis) {
            double proj = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) proj += q[i] * v[i];
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * q[i];
        }
        double nrm = 0.0;
        for (double x : v) nrm += x * x;
        nrm = std::sqrt(nrm);
        if (nrm < 1e-8) continue;
        for (double& x : v) x /= nrm;
        basis.push_back(v);
        if (basis.size() == 2) break;
    }
    if (basis.size() < 2) throw numerical_error("conjugate_pair_basis: span is not two-dimensional");
    std::vector<cplx> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = cplx(basis[0][i], basis[1][i]) / std::sqrt(2.0);
    return out;
}

struct SpectralBounds {
    bool p0 = false;     // p0 >= 1/2 - 3n / 2^{n+1}
    bool p1 = false;     // p1 >= 1/2 - 3n / (8 c^2 C(n-1, n/2))
    bool eta = false;    // |e^{i eta} - i| <= 0.2
    bool angle = false;  // | |omega'_0| - 1/(c sqrt(2^{n-1})) | <= beta_cap
};

struct SpectralSummary {
    int n = 0;
    double omega0 = 0.0;            // |omega'_0|, radians
    double omega0_predicted = 0.0;  // 1 / (c sqrt(2^{n-1}))
    double omega0_deviation = 0.0;  // | omega0 - omega0_predicted |
    double beta_cap = 0.0;          // angle_deviation_cap * n^{3/2} / 2^n
    double p0 = 0.0;
    double p1 = 0.0;
    double p0_bound = 0.0;
    double p1_bound = 0.0;
    cplx eta;            // e^{i eta}
    double delta = 0.0;  // |e^{i eta} - i|
    double c = 0.0;
    int arc_count = 0;
    bool degenerate = false;
    SpectralBounds bounds_ok;

    [[nodiscard]] double residual_mass() const { return 1.0 - p0 - p1; }
};

inline constexpr double eta_delta_flag = 0.2;
// Both arc eigenvalues within this of the real axis count as the double eigenvalue 1.
inline constexpr double degenerate_pair_tol = 1e-13;

/// Decomposes the collapsed U' for even n in [4, 64] and evaluates the arc pair.
///
/// The arc eigenvector with negative angle is used for the overlaps; it is rotated so that
/// <psi_0|v> is real and positive, and e^{i eta} is the phase of <psi_1|v>.
[[nodiscard]] inline SpectralSummary spectral_summary(int n, double tol_eig = default_tol_eig) {
    if (n < 4 || n > dense_operator_max_n || n % 2 != 0)
        throw usage_error("spectral_summary: requires even n in [4, " + std::to_string(dense_operator_max_n) +
                          "], got " + std::to_string(n));

    const auto op = build_collapsed_unitary(n, true, OperatorStorage::Dense);
    const auto spectrum = eigendecompose(op.to_dense(), tol_eig, "collapsed U' (n = " + std::to_string(n) + ")");
    const auto arc = arc_members(spectrum, n);

    SpectralSummary s;
    s.n = n;
    s.arc_count = static_cast<int>(arc.size());
    if (arc.size() != 2)
        throw numerical_error("structural failure: collapsed U' for n = " + std::to_string(n) + " has " +
                              std::to_string(arc.size()) + " eigenvalues on the arc, expected 2");

    const auto psi0 = collapsed_initial_state(n);
    const auto [psi1, c] = psi1_state(n);
    s.c = c;

    const auto& neg = arc[0].value.imag() < arc[1].value.imag() ? arc[0] : arc[1];
    std::vector<cplx> v = neg.vector;
    if (std::abs(arc[0].value.imag()) <= degenerate_pair_tol && std::abs(arc[1].value.imag()) <= degenerate_pair_tol) {
        s.degenerate = true;
        v = conjugate_pair_basis(arc[0].vector, arc[1].vector);
    }

    const cplx o0 = inner_product(psi0.amps(), v);
    const cplx gauge = std::abs(o0) > 0.0 ? std::conj(o0) / std::abs(o0) : cplx(1.0);
    for (auto& z : v) z *= gauge;
    const cplx a0 = inner_product(psi0.amps(), v);
    const cplx a1 = inner_product(psi1.amps(), v);
    s.p0 = std::norm(a0);
    s.p1 = std::norm(a1);
    s.eta = std::abs(a1) > 0.0 ? a1 / std::abs(a1) : cplx(1.0);
    s.delta = std::abs(s.eta - cplx(0.0, 1.0));

    s.omega0 = std::abs(neg.angle());
    s.omega0_predicted = 1.0 / (c * std::sqrt(std::pow(2.0, n - 1)));
    s.omega0_deviation = std::abs(s.omega0 - s.omega0_predicted);
    s.beta_cap = fixtures::angle_deviation_cap * std::pow(n, 1.5) / std::pow(2.0, n);

    s.p0_bound = 0.5 - 3.0 * n / std::pow(2.0, n + 1);
    s.p1_bound = 0.5 - 3.0 * n / (8.0 * c * c * binomial(n - 1, n / 2));
    s.bounds_ok.p0 = s.p0 >= s.p0_bound;
    s.bounds_ok.p1 = s.p1 >= s.p1_bound;
    s.bounds_ok.eta = s.delta <= eta_delta_flag;
    s.bounds_ok.angle = s.omega0_deviation <= s.beta_cap;
    return s;
}

inline void to_json(nlohmann::json& j, const SpectralSummary& s) {
    j = nlohmann::json{
        {"n", s.n},
        {"omega0", s.omega0},
        {"omega0_predicted", s.omega0_predicted},
        {"omega0_deviation", s.omega0_deviation},
        {"beta_cap", s.beta_cap},
        {"p0", s.p0},
        {"p1", s.p1},
        {"p0_bound", s.p0_bound},
        {"p1_bound", s.p1_bound},
        {"p0_slack", s.p0 - s.p0_bound},
        {"p1_slack", s.p1 - s.p1_bound},
        {"eta", {s.eta.real(), s.eta.imag()}},
        {"delta", s.delta},
        {"c", s.c},
        {"residual_mass", s.residual_mass()},
        {"arc_count", s.arc_count},
        {"degenerate", s.degenerate},
        {"bounds_ok",
         {{"p0", s.bounds_ok.p0}, {"p1", s.bounds_ok.p1}, {"eta", s.bounds_ok.eta}, {"angle", s.bounds_ok.angle}}},
    };
}

}  // namespace qwalk
