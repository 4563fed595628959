#pragma once

// Oracle-derived constants for asymptotic statements that carry no explicit constant.
// Each value is twice the worst case measured over the stated sweep, rounded up.
// Regenerate with `qwalk verify --n-range 8..32` (reports the measured ratios as
// `measured` on the corresponding checks) and re-run tests/test_fixtures.cpp, which
// recomputes the sweeps and fails if a cap loses its headroom. No randomness is involved
// (seed irrelevant).

namespace qwalk::fixtures {

// | |omega'_0| - 1/(c sqrt(2^{n-1})) | <= cap * n^{3/2} / 2^n.
// Sweep: even n in [8, 32]. Worst: 0.01408 at n = 8.
inline constexpr double angle_deviation_cap = 0.03;

// p_exact(t_f) >= 1/2 - kappa / n.
// Sweep: even n in [8, 24], collapsed backend. Worst: (1/2 - p) * n = 0.6710 at n = 12.
inline constexpr double success_window_kappa = 1.35;

// max_{t <= 2 t_f} |<psi_0|state(t)> - cos(omega'_0 t)| <= cap * n^{3/4} / sqrt(2^n).
// Sweep: even n in [8, 16]. Worst: 0.01870 at n = 8.
inline constexpr double rotation_residual_cap = 0.04;

}  // namespace qwalk::fixtures
