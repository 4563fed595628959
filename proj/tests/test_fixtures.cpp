#include <catch_amalgamated.hpp>

#include <cmath>
#include <iostream>

#include "qwalk/fixtures.hpp"
#include "qwalk/search.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/verify.hpp"

// Recomputes the sweeps behind the fixture caps. Each cap must keep at least 2x headroom
// over the worst measured value; if the numbers drift, regenerate the caps from the
// printed worst cases.

using namespace qwalk;

TEST_CASE("angle deviation cap keeps its headroom", "[fixtures]") {
    double worst = 0.0;
    int worst_n = 0;
    for (int n = 8; n <= 32; n += 2) {
        const auto s = spectral_summary(n);
        const double ratio = s.omega0_deviation * std::pow(2.0, n) / std::pow(n, 1.5);
        if (ratio > worst) {
            worst = ratio;
            worst_n = n;
        }
    }
    std::cout << "angle_deviation: worst " << worst << " at n = " << worst_n << ", cap "
              << fixtures::angle_deviation_cap << '\n';
    CHECK(2.0 * worst <= fixtures::angle_deviation_cap);
}

TEST_CASE("success window kappa keeps its headroom", "[fixtures]") {
    double worst = 0.0;
    int worst_n = 0;
    for (int n = 8; n <= 24; n += 2) {
        WalkConfig cfg;
        cfg.n = n;
        const auto out = run_search(cfg, Backend::Collapsed, 1);
        CHECK(out.p_exact <= 0.5 + 1e-6);
        const double kappa = (0.5 - out.p_exact) * n;
        if (kappa > worst) {
            worst = kappa;
            worst_n = n;
        }
    }
    std::cout << "success_window: worst kappa " << worst << " at n = " << worst_n << ", fixture "
              << fixtures::success_window_kappa << '\n';
    CHECK(2.0 * worst <= fixtures::success_window_kappa);
}

TEST_CASE("rotation residual cap keeps its headroom", "[fixtures]") {
    double worst = 0.0;
    int worst_n = 0;
    for (int n = 8; n <= 16; n += 2) {
        const double omega = spectral_summary(n).omega0;
        const auto op = build_collapsed_unitary(n, true);
        const auto psi0 = collapsed_initial_state(n);
        CollapsedState s = psi0;
        double res = 0.0;
        for (long long t = 0; t <= 2 * t_final(n); ++t) {
            if (t > 0) s = collapsed_step(s, op);
            res = std::max(res, std::abs(dot(psi0, s) - std::cos(omega * static_cast<double>(t))));
        }
        // The sweep inside verify must see the same number.
        CHECK(res == time_profile(n, omega).rotation_residual);
        const double ratio = res * std::sqrt(std::pow(2.0, n)) / std::pow(n, 0.75);
        if (ratio > worst) {
            worst = ratio;
            worst_n = n;
        }
    }
    std::cout << "rotation_residual: worst " << worst << " at n = " << worst_n << ", cap "
              << fixtures::rotation_residual_cap << '\n';
    CHECK(2.0 * worst <= fixtures::rotation_residual_cap);
}
