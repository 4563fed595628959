#pragma once

// The search itself: start in the uniform superposition, apply the marked walk U' for t_f
// steps, measure. Either backend can run it; the collapsed one covers target 0 and, by
// the XOR relabeling x -> x ^ target, every other target.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qwalk/collapsed.hpp"
#include "qwalk/config.hpp"
#include "qwalk/full_state.hpp"
#include "qwalk/sampling.hpp"

namespace qwalk {

enum class Backend { Full, Collapsed };

// Derived: (pi/2) sqrt(2^{n-1}). Stated: (pi/2) sqrt(2^n), the figure quoted in the
// algorithm summary.
enum class TfConvention { Derived, Stated };

[[nodiscard]] inline std::string to_string(Backend b) { return b == Backend::Full ? "full" : "collapsed"; }
[[nodiscard]] inline std::string to_string(TfConvention c) {
    return c == TfConvention::Derived ? "derived" : "stated";
}

/// Nearest integer to (pi/2) sqrt(2^{n-1}) (or sqrt(2^n)); halves round away from zero.
[[nodiscard]] inline long long t_final(int n, TfConvention convention = TfConvention::Derived) {
    if (n < 2) throw usage_error("t_final: n must be >= 2");
    const int e = convention == TfConvention::Derived ? n - 1 : n;
    return std::llround(std::numbers::pi / 2.0 * std::sqrt(std::pow(2.0, e)));
}

struct CurvePoint {
    long long t;
    double p_target;
    friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct SearchOutcome {
    int n = 0;
    std::uint64_t target = 0;
    long long t_f = 0;
    TfConvention convention = TfConvention::Derived;
    Backend backend = Backend::Collapsed;
    double p_exact = 0.0;
    double p_empirical = 0.0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<CurvePoint> curve;  // empty unless requested
};

namespace detail {

inline void check_backend(const WalkConfig& cfg, Backend backend) {
    cfg.validate();
    if (backend == Backend::Full) {
        require_full_capacity(cfg.n);
    } else if (cfg.marking_coin.kind != MarkingCoinKind::MinusIdentity) {
        throw usage_error("collapsed backend models only the -I marking coin");
    }
}

// Walks psi_0 under U' for t steps, reporting P(target) after every step through `on_step`.
template <typename OnStep>
FullState run_full(const WalkConfig& cfg, long long t, OnStep&& on_step) {
    FullState s = uniform_state(cfg.n);
    on_step(0, node_distribution(s, cfg.tol)[cfg.target]);
    for (long long i = 1; i <= t; ++i) {
        s = step(std::move(s), cfg, true);
        on_step(i, node_distribution(s, cfg.tol)[cfg.target]);
    }
    return s;
}

template <typename OnStep>
CollapsedState run_collapsed(const WalkConfig& cfg, long long t, OnStep&& on_step) {
    const auto op = build_collapsed_unitary(cfg.n, true);
    CollapsedState s = collapsed_initial_state(cfg.n);
    on_step(0, marked_probability(s, cfg.tol));
    for (long long i = 1; i <= t; ++i) {
        s = collapsed_step(s, op);
        on_step(i, marked_probability(s, cfg.tol));
    }
    return s;
}

}  // namespace detail

/// Runs the walk search for t_final(n) steps and samples `trials` measurements from the
/// final state with cfg.seed. Success is the target node, whatever the coin reads.
[[nodiscard]] inline SearchOutcome run_search(const WalkConfig& cfg, Backend backend, std::size_t trials,
                                              TfConvention convention = TfConvention::Derived,
                                              bool record_curve = false) {
    detail::check_backend(cfg, backend);
    if (trials < 1) throw usage_error("run_search: trials must be >= 1");

    SearchOutcome out;
    out.n = cfg.n;
    out.target = cfg.target;
    out.t_f = t_final(cfg.n, convention);
    out.convention = convention;
    out.backend = backend;
    out.trials = trials;
    out.seed = cfg.seed;

    auto on_step = [&](long long t, double p) {
        if (record_curve) out.curve.push_back({t, p});
        if (t == out.t_f) out.p_exact = p;
    };

    std::size_t hits = 0;
    if (backend == Backend::Full) {
        const FullState s = detail::run_full(cfg, out.t_f, on_step);
        for (const auto& m : sample_measurement(s, cfg.seed, trials))
            if (m.node == cfg.target) ++hits;
    } else {
        const CollapsedState s = detail::run_collapsed(cfg, out.t_f, on_step);
        std::vector<double> weights(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) weights[i] = std::norm(s.amps()[i]);
        const DiscreteSampler sampler(weights);
        std::mt19937_64 rng(cfg.seed);
        for (std::size_t i = 0; i < trials; ++i)
            if (sampler(rng) == r_index(0)) ++hits;
    }
    out.p_empirical = static_cast<double>(hits) / static_cast<double>(trials);
    return out;
}

/// P(target) after t = 0 .. t_max steps of U'.
[[nodiscard]] inline std::vector<CurvePoint> probability_curve(const WalkConfig& cfg, long long t_max,
                                                               Backend backend) {
    if (t_max < 1) throw usage_error("probability_curve: t_max must be >= 1");
    detail::check_backend(cfg, backend);
    std::vector<CurvePoint> curve;
    curve.reserve(static_cast<std::size_t>(t_max) + 1);
    auto on_step = [&](long long t, double p) { curve.push_back({t, p}); };
    if (backend == Backend::Full)
        (void)detail::run_full(cfg, t_max, on_step);
    else
        (void)detail::run_collapsed(cfg, t_max, on_step);
    return curve;
}

/// 1 - (1 - p)^r: chance that at least one of r independent runs succeeds.
[[nodiscard]] inline double amplified_success(double p_single, int repetitions) {
    if (!(p_single >= 0.0 && p_single <= 1.0)) throw usage_error("amplified_success: p must lie in [0, 1]");
    if (repetitions < 1) throw usage_error("amplified_success: repetitions must be >= 1");
    return 1.0 - std::pow(1.0 - p_single, repetitions);
}

struct GroverReference {
    long long iterations;
    double p_success;
};

// Closed form for one marked item among N = 2^n.
[[nodiscard]] inline GroverReference grover_reference(int n) {
    if (n < 2) throw usage_error("grover_reference: n must be >= 2");
    const double big_n = std::pow(2.0, n);
    const double theta = std::asin(1.0 / std::sqrt(big_n));
    const auto k = static_cast<long long>(std::floor(std::numbers::pi / (4.0 * theta)));
    const double amp = std::sin((2.0 * static_cast<double>(k) + 1.0) * theta);
    return {k, amp * amp};
}

inline void to_json(nlohmann::json& j, const SearchOutcome& o) {
    j = nlohmann::json{
        {"n", o.n},
        {"target", o.target},
        {"t_f", o.t_f},
        {"t_f_convention", to_string(o.convention)},
        {"backend", to_string(o.backend)},
        {"p_exact", o.p_exact},
        {"p_empirical", o.p_empirical},
        {"trials", o.trials},
        {"seed", o.seed},
    };
    if (!o.curve.empty()) {
        auto curve = nlohmann::json::array();
        for (const auto& pt : o.curve) curve.push_back({pt.t, pt.p_target});
        j["curve"] = std::move(curve);
    }
}

}  // namespace qwalk
