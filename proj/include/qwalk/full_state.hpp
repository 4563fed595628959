#pragma once

// Coined quantum walk on the n-cube, simulated on the full n * 2^n amplitude space.
//
// Amplitude layout: index = d * 2^n + x for direction d in [0, n) and node x in [0, 2^n).
// One step of the walk is U = S * C, where C applies the Grover coin to the n-vector of
// amplitudes at every node (and the marking coin at the target when perturbed), and S
// moves |d, x> to |d, x ^ 2^d>.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qwalk/config.hpp"
#include "qwalk/matrix.hpp"
#include "qwalk/sampling.hpp"

namespace qwalk {

class FullState {
public:
    FullState(int n, std::vector<cplx> amps) : n_{n}, amps_{std::move(amps)} {
        if (n < 1 || n > hard_max_full_dimension) throw usage_error("FullState: invalid dimension");
        if (amps_.size() != size_for(n)) {
            throw usage_error("FullState: expected " + std::to_string(size_for(n)) + " amplitudes, got " +
                              std::to_string(amps_.size()));
        }
    }

    static FullState zero(int n) {
        if (n < 1) throw usage_error("FullState: invalid dimension");
        require_full_capacity(n);
        return FullState(n, std::vector<cplx>(size_for(n)));
    }

    static FullState basis(int n, int d, std::uint64_t x) {
        FullState s = zero(n);
        if (d < 0 || d >= n || x >= s.nodes()) throw usage_error("FullState::basis: index out of range");
        s(d, x) = 1.0;
        return s;
    }

    [[nodiscard]] static std::size_t size_for(int n) noexcept {
        return static_cast<std::size_t>(n) << static_cast<unsigned>(n);
    }

    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] std::uint64_t nodes() const noexcept { return std::uint64_t{1} << n_; }
    [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }
    [[nodiscard]] std::size_t index(int d, std::uint64_t x) const noexcept {
        return static_cast<std::size_t>(d) * nodes() + x;
    }

    cplx& operator()(int d, std::uint64_t x) noexcept { return amps_[index(d, x)]; }
    const cplx& operator()(int d, std::uint64_t x) const noexcept { return amps_[index(d, x)]; }

    [[nodiscard]] std::span<const cplx> amps() const noexcept { return amps_; }
    [[nodiscard]] std::span<cplx> amps() noexcept { return amps_; }

    // Sequential sum: bitwise reproducible.
    [[nodiscard]] double norm() const { return std::sqrt(norm_squared(amps_)); }

    friend bool operator==(const FullState&, const FullState&) = default;

private:
    int n_;
    std::vector<cplx> amps_;
};

struct Measurement {
    int direction;
    std::uint64_t node;
    friend bool operator==(const Measurement&, const Measurement&) = default;
};

/// Grover diffusion coin G = -I + 2|s><s|: entries 2/n - delta_ij.
[[nodiscard]] inline DenseMatrix<double> grover_coin(int n) {
    if (n < 1) throw usage_error("grover_coin: invalid dimension n = " + std::to_string(n));
    const auto sz = static_cast<std::size_t>(n);
    DenseMatrix<double> g(sz, sz);
    for (std::size_t i = 0; i < sz; ++i)
        for (std::size_t j = 0; j < sz; ++j) g(i, j) = 2.0 / n - (i == j ? 1.0 : 0.0);
    return g;
}

/// Equal superposition over all (d, x).
[[nodiscard]] inline FullState uniform_state(int n) {
    if (n < 2) throw usage_error("uniform_state: n must be >= 2");
    FullState s = FullState::zero(n);
    const cplx a = 1.0 / std::sqrt(static_cast<double>(s.size()));
    for (auto& z : s.amps()) z = a;
    return s;
}

[[nodiscard]] inline FullState apply_shift(FullState s) {
    const std::uint64_t nodes = s.nodes();
    for (int d = 0; d < s.n(); ++d) {
        const std::uint64_t bit = std::uint64_t{1} << d;
        for (std::uint64_t x = 0; x < nodes; ++x)
            if ((x & bit) == 0) std::swap(s(d, x), s(d, x | bit));
    }
    return s;
}

/// Grover coin at every node; at cfg.target the marking coin replaces it when perturbed.
/// G acts as the rank-one update G v = (2/n) sum(v) - v.
[[nodiscard]] inline FullState apply_coin(FullState s, const WalkConfig& cfg, bool perturbed) {
    if (cfg.n != s.n()) throw usage_error("apply_coin: config dimension does not match state");
    const int n = s.n();
    const std::uint64_t nodes = s.nodes();
    if (perturbed && cfg.target >= nodes) throw usage_error("apply_coin: target out of range");

    std::vector<cplx> marked;
    if (perturbed) {
        marked.resize(static_cast<std::size_t>(n));
        for (int d = 0; d < n; ++d) marked[d] = s(d, cfg.target);
    }

    std::vector<cplx> sums(nodes);
    for (int d = 0; d < n; ++d)
        for (std::uint64_t x = 0; x < nodes; ++x) sums[x] += s(d, x);
    const double scale = 2.0 / n;
    for (int d = 0; d < n; ++d)
        for (std::uint64_t x = 0; x < nodes; ++x) s(d, x) = scale * sums[x] - s(d, x);

    if (perturbed) {
        if (cfg.marking_coin.kind == MarkingCoinKind::MinusIdentity) {
            for (int d = 0; d < n; ++d) s(d, cfg.target) = -marked[d];
        } else {
            const auto out = cfg.marking_coin.matrix.apply(std::span<const cplx>(marked));
            for (int d = 0; d < n; ++d) s(d, cfg.target) = out[d];
        }
    }
    return s;
}

[[nodiscard]] inline FullState step(FullState s, const WalkConfig& cfg, bool perturbed) {
    return apply_shift(apply_coin(std::move(s), cfg, perturbed));
}

[[nodiscard]] inline FullState evolve(FullState s, const WalkConfig& cfg, long long t, bool perturbed) {
    if (t < 0) throw usage_error("evolve: step count must be nonnegative");
    for (long long i = 0; i < t; ++i) s = step(std::move(s), cfg, perturbed);
    return s;
}

/// P[x] = sum_d |amp(d, x)|^2. Rejects inputs whose norm^2 deviates from 1 by more than tol.
[[nodiscard]] inline std::vector<double> node_distribution(const FullState& s, double tol = 1e-9) {
    const double total = norm_squared(s.amps());
    if (std::abs(total - 1.0) > tol)
        throw usage_error("node_distribution: state is not normalized (norm^2 = " + std::to_string(total) + ")");
    std::vector<double> p(s.nodes());
    for (int d = 0; d < s.n(); ++d)
        for (std::uint64_t x = 0; x < s.nodes(); ++x) p[x] += std::norm(s(d, x));
    return p;
}

/// Joint (d, x) samples from |amp|^2: node from the marginal, then direction given the node.
[[nodiscard]] inline std::vector<Measurement> sample_measurement(const FullState& s, std::uint64_t seed,
                                                                 std::size_t trials) {
    if (trials < 1) throw usage_error("sample_measurement: trials must be >= 1");
    const auto marginal = node_distribution(s);
    const DiscreteSampler pick_node(marginal);
    std::mt19937_64 rng(seed);
    std::vector<double> weights(static_cast<std::size_t>(s.n()));
    std::vector<Measurement> out;
    out.reserve(trials);
    for (std::size_t i = 0; i < trials; ++i) {
        const auto x = static_cast<std::uint64_t>(pick_node(rng));
        for (int d = 0; d < s.n(); ++d) weights[d] = std::norm(s(d, x));
        const auto d = static_cast<int>(DiscreteSampler(weights)(rng));
        out.push_back({d, x});
    }
    return out;
}

[[nodiscard]] inline std::uint64_t swap_bits(std::uint64_t x, int i, int j) noexcept {
    const std::uint64_t bi = (x >> i) & 1U;
    const std::uint64_t bj = (x >> j) & 1U;
    if (bi == bj) return x;
    return x ^ ((std::uint64_t{1} << i) | (std::uint64_t{1} << j));
}

/// P_ij: swaps node bits i, j and exchanges directions i, j. Involution.
[[nodiscard]] inline FullState apply_bit_swap(const FullState& s, int i, int j) {
    if (i < 0 || j < 0 || i >= s.n() || j >= s.n()) throw usage_error("apply_bit_swap: bit index out of range");
    FullState out = FullState::zero(s.n());
    for (int d = 0; d < s.n(); ++d) {
        const int dp = d == i ? j : (d == j ? i : d);
        for (std::uint64_t x = 0; x < s.nodes(); ++x) out(dp, swap_bits(x, i, j)) = s(d, x);
    }
    return out;
}

/// Fourier-mode eigenvector of the unperturbed walk for wave vector k_bits.
/// sign = +1 gives eigenvalue 1 - 2k/n + (2i/n) sqrt(k(n-k)), sign = -1 its conjugate,
/// with k = popcount(k_bits). For k = 0 or k = n only one direction class exists and the
/// vector is renormalized.
[[nodiscard]] inline FullState fourier_eigenvector(int n, std::uint64_t k_bits, int sign) {
    FullState v = FullState::zero(n);
    if (k_bits >= v.nodes()) throw usage_error("fourier_eigenvector: wave vector out of range");
    const int k = std::popcount(k_bits);
    const double base = std::pow(2.0, -0.5 * n) / std::sqrt(2.0);
    const cplx on = k > 0 ? cplx(1.0 / std::sqrt(static_cast<double>(k))) : cplx{};
    const cplx off = k < n ? cplx(0.0, -sign / std::sqrt(static_cast<double>(n - k))) : cplx{};
    for (std::uint64_t x = 0; x < v.nodes(); ++x) {
        const double parity = (std::popcount(k_bits & x) % 2 == 0) ? 1.0 : -1.0;
        for (int d = 0; d < n; ++d) v(d, x) = parity * base * (((k_bits >> d) & 1U) ? on : off);
    }
    if (k == 0 || k == n) {
        const double nrm = v.norm();
        for (auto& z : v.amps()) z /= nrm;
    }
    return v;
}

inline void to_json(nlohmann::json& j, const FullState& s) {
    auto amps = nlohmann::json::array();
    for (const auto& z : s.amps()) amps.push_back({z.real(), z.imag()});
    j = nlohmann::json{{"n", s.n()}, {"amps", std::move(amps)}};
}

inline FullState full_state_from_json(const nlohmann::json& j) {
    const int n = j.at("n").get<int>();
    std::vector<cplx> amps;
    for (const auto& pair : j.at("amps")) amps.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    return FullState(n, std::move(amps));
}

}  // namespace qwalk
