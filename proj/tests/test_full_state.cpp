#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <map>

#include "oracles.hpp"
#include "qwalk/full_state.hpp"

using namespace qwalk;
using Catch::Matchers::WithinAbs;

namespace {

WalkConfig config(int n, std::uint64_t target = 0) {
    WalkConfig cfg;
    cfg.n = n;
    cfg.target = target;
    return cfg;
}

std::vector<cplx> dense_apply(const DenseMatrix<cplx>& m, const FullState& s) {
    return m.apply(s.amps());
}

}  // namespace

TEST_CASE("grover_coin entries are 2/n - delta", "[full][coin]") {
    const auto g2 = grover_coin(2);
    CHECK(g2(0, 0) == 0.0);
    CHECK(g2(0, 1) == 1.0);
    CHECK(g2(1, 0) == 1.0);
    CHECK(g2(1, 1) == 0.0);

    const auto g1 = grover_coin(1);
    CHECK(g1(0, 0) == 1.0);

    const auto g4 = grover_coin(4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(g4(i, j) == (i == j ? -0.5 : 0.5));

    CHECK_THROWS_AS(grover_coin(0), usage_error);
}

TEST_CASE("grover_coin is a symmetric involution", "[full][coin]") {
    for (int n = 1; n <= 12; ++n) {
        const auto g = grover_coin(n);
        CHECK(unitarity_residual(g) < 1e-14);
        CHECK(max_abs_difference(g * g, DenseMatrix<double>::identity(n)) < 1e-14);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) CHECK(g(i, j) == g(j, i));
    }
}

TEST_CASE("uniform_state has equal amplitudes and unit norm", "[full]") {
    const auto s2 = uniform_state(2);
    REQUIRE(s2.size() == 8);
    for (const auto& z : s2.amps()) CHECK_THAT(z.real(), WithinAbs(1.0 / std::sqrt(8.0), 1e-15));
    CHECK_THAT(s2.amps()[0].real(), WithinAbs(0.353553, 1e-6));

    const auto s3 = uniform_state(3);
    REQUIRE(s3.size() == 24);
    for (const auto& z : s3.amps()) CHECK_THAT(z.real(), WithinAbs(1.0 / std::sqrt(24.0), 1e-15));

    for (int n = 2; n <= 12; ++n) CHECK_THAT(uniform_state(n).norm(), WithinAbs(1.0, 1e-12));
    CHECK_THROWS_AS(uniform_state(1), usage_error);
}

TEST_CASE("full-space memory cap is enforced and overridable", "[full][capacity]") {
    CHECK(max_full_dimension() == default_max_full_dimension);
    CHECK_THROWS_AS(uniform_state(default_max_full_dimension + 1), capacity_error);

    ::setenv("QWALK_MAX_N", "6", 1);
    CHECK(max_full_dimension() == 6);
    CHECK_NOTHROW(uniform_state(6));
    CHECK_THROWS_AS(uniform_state(7), capacity_error);
    ::setenv("QWALK_MAX_N", "not-a-number", 1);
    CHECK(max_full_dimension() == default_max_full_dimension);
    ::unsetenv("QWALK_MAX_N");
}

TEST_CASE("apply_shift flips bit d of the node", "[full][shift]") {
    auto s = apply_shift(FullState::basis(3, 0, 0b000));
    CHECK(s(0, 0b001) == cplx(1.0));
    CHECK(norm_squared(s.amps()) == 1.0);

    s = apply_shift(FullState::basis(3, 2, 0b101));
    CHECK(s(2, 0b001) == cplx(1.0));

    const auto r = oracle::random_state(4, 11);
    CHECK(apply_shift(apply_shift(r)) == r);
}

TEST_CASE("apply_coin acts blockwise per node", "[full][coin]") {
    SECTION("marking coin -I negates the target block") {
        const auto cfg = config(3, 5);
        const auto s = apply_coin(FullState::basis(3, 0, 5), cfg, true);
        CHECK(s(0, 5) == cplx(-1.0));
        CHECK(norm_squared(s.amps()) == 1.0);
    }
    SECTION("unperturbed coin applies one Grover column") {
        const int n = 4;
        const auto s = apply_coin(FullState::basis(n, 0, 9), config(n), false);
        for (int d = 0; d < n; ++d) CHECK_THAT(s(d, 9).real(), WithinAbs(2.0 / n - (d == 0 ? 1.0 : 0.0), 1e-15));
        for (std::uint64_t x = 0; x < s.nodes(); ++x)
            if (x != 9)
                for (int d = 0; d < n; ++d) CHECK(s(d, x) == cplx{});
    }
    SECTION("perturbed coin on the n = 2 uniform state matches the dense 8x8 product") {
        const auto cfg = config(2, 0);
        const auto in = uniform_state(2);
        const auto got = apply_coin(in, cfg, true);
        // C' = G (x) I + (-I - G) (x) |0><0|, written out by hand: node 0 block negated, others swapped.
        DenseMatrix<cplx> coin(8, 8);
        for (std::uint64_t x = 0; x < 4; ++x)
            for (int d = 0; d < 2; ++d)
                for (int dp = 0; dp < 2; ++dp) {
                    const double g = (x == 0) ? (d == dp ? -1.0 : 0.0) : (d == dp ? 0.0 : 1.0);
                    coin(d * 4 + x, dp * 4 + x) = g;
                }
        const auto want = coin.apply(in.amps());
        CHECK(max_abs_difference(got.amps(), want) < 1e-15);
        CHECK_THAT(got.norm(), WithinAbs(1.0, 1e-15));
        CHECK(got(0, 0).real() < 0.0);
    }
    SECTION("dimension mismatch is rejected") {
        CHECK_THROWS_AS(apply_coin(uniform_state(3), config(4), false), usage_error);
    }
}

TEST_CASE("custom marking coins", "[full][coin]") {
    WalkConfig cfg = config(3, 6);
    cfg.marking_coin = MarkingCoin::custom(oracle::random_unitary(3, 7));
    REQUIRE_NOTHROW(cfg.validate());

    const auto dense = oracle::dense_full_walk(3, 6, true, &cfg.marking_coin.matrix);
    const auto s = oracle::random_state(3, 99);
    CHECK(max_abs_difference(step(s, cfg, true).amps(), dense_apply(dense, s)) < 1e-13);

    WalkConfig bad = config(3);
    DenseMatrix<cplx> m(3, 3);
    m(0, 0) = 2.0;
    m(1, 1) = 1.0;
    m(2, 2) = 1.0;
    bad.marking_coin = MarkingCoin::custom(m);
    CHECK_THROWS_AS(bad.validate(), usage_error);
}

TEST_CASE("WalkConfig validation", "[full][config]") {
    CHECK_THROWS_AS(config(1).validate(), usage_error);
    CHECK_THROWS_AS(config(3, 8).validate(), usage_error);
    CHECK_NOTHROW(config(3, 7).validate());
}

TEST_CASE("step keeps the uniform state fixed without marking", "[full][step]") {
    for (int n = 2; n <= 10; ++n) {
        const auto u = uniform_state(n);
        CHECK(max_abs_difference(step(u, config(n), false).amps(), u.amps()) < 1e-14);
    }
}

TEST_CASE("<psi0|U'|psi0> = 1 - 1/2^(n-1)", "[full][step]") {
    for (int n = 2; n <= 12; ++n) {
        const auto u = uniform_state(n);
        const auto out = step(u, config(n), true);
        const cplx overlap = inner_product(u.amps(), out.amps());
        CHECK_THAT(overlap.real(), WithinAbs(1.0 - std::pow(2.0, 1 - n), 1e-12));
        CHECK_THAT(overlap.imag(), WithinAbs(0.0, 1e-12));
        CHECK(max_abs_difference(out.amps(), u.amps()) > 0.0);
    }
}

TEST_CASE("step is unitary on random states", "[full][step][property]") {
    for (int n = 2; n <= 10; ++n) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto s = oracle::random_state(n, 1000 * n + seed);
            const auto cfg = config(n, seed % (std::uint64_t{1} << n));
            CHECK_THAT(step(s, cfg, true).norm(), WithinAbs(1.0, 1e-12));
            CHECK_THAT(step(s, cfg, false).norm(), WithinAbs(1.0, 1e-12));
        }
    }
}

TEST_CASE("step matches the dense operator for arbitrary targets", "[full][step]") {
    for (std::uint64_t target : {0U, 5U, 7U}) {
        const auto dense = oracle::dense_full_walk(3, target, true);
        CHECK(unitarity_residual(dense) < 1e-13);
        const auto s = oracle::random_state(3, target + 17);
        CHECK(max_abs_difference(step(s, config(3, target), true).amps(), dense_apply(dense, s)) < 1e-14);
    }
}

TEST_CASE("evolve", "[full][evolve]") {
    SECTION("t = 0 is the identity") {
        const auto s = oracle::random_state(4, 3);
        CHECK(evolve(s, config(4), 0, true) == s);
    }
    SECTION("uniform state is a fixed point of U") {
        for (int n = 2; n <= 8; ++n) {
            const auto u = uniform_state(n);
            CHECK(max_abs_difference(evolve(u, config(n), 100, false).amps(), u.amps()) < 1e-10);
        }
    }
    SECTION("two perturbed steps equal (U')^2 from the dense oracle, n = 4") {
        const auto dense = oracle::dense_full_walk(4, 0, true);
        const auto s = oracle::random_state(4, 5);
        const auto want = (dense * dense).apply(s.amps());
        CHECK(max_abs_difference(evolve(s, config(4), 2, true).amps(), want) < 1e-13);
    }
    SECTION("negative step count is rejected") {
        CHECK_THROWS_AS(evolve(uniform_state(3), config(3), -1, true), usage_error);
    }
}

TEST_CASE("node_distribution marginalizes over directions", "[full][measure]") {
    const auto p = node_distribution(uniform_state(5));
    for (double v : p) CHECK_THAT(v, WithinAbs(1.0 / 32.0, 1e-15));

    const auto b = node_distribution(FullState::basis(3, 1, 5));
    for (std::uint64_t x = 0; x < 8; ++x) CHECK(b[x] == (x == 5 ? 1.0 : 0.0));

    FullState half = FullState::basis(3, 1, 5);
    half(1, 5) = 0.5;
    CHECK_THROWS_AS(node_distribution(half), usage_error);
}

TEST_CASE("sample_measurement", "[full][measure]") {
    SECTION("basis states always yield the basis index") {
        for (const auto& m : sample_measurement(FullState::basis(4, 2, 11), 1, 500)) {
            CHECK(m.direction == 2);
            CHECK(m.node == 11);
        }
    }
    SECTION("uniform n = 2 frequencies concentrate at 1/8") {
        std::map<std::pair<int, std::uint64_t>, int> counts;
        const int trials = 100000;
        for (const auto& m : sample_measurement(uniform_state(2), 2024, trials)) ++counts[{m.direction, m.node}];
        REQUIRE(counts.size() == 8);
        for (const auto& [key, count] : counts) CHECK_THAT(count / double(trials), WithinAbs(0.125, 0.01));
    }
    SECTION("fixed seed reproduces the sequence") {
        const auto s = oracle::random_state(3, 8);
        CHECK(sample_measurement(s, 42, 1000) == sample_measurement(s, 42, 1000));
        CHECK(sample_measurement(s, 42, 1000) != sample_measurement(s, 43, 1000));
    }
    SECTION("zero trials is rejected") {
        CHECK_THROWS_AS(sample_measurement(uniform_state(2), 1, 0), usage_error);
    }
}

TEST_CASE("apply_bit_swap", "[full][symmetry]") {
    const auto s = apply_bit_swap(FullState::basis(2, 0, 0b01), 0, 1);
    CHECK(s(1, 0b10) == cplx(1.0));

    const auto r = oracle::random_state(4, 21);
    CHECK(apply_bit_swap(r, 2, 2) == r);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(apply_bit_swap(apply_bit_swap(r, i, j), i, j) == r);

    CHECK_THROWS_AS(apply_bit_swap(r, 0, 4), usage_error);
    CHECK_THROWS_AS(apply_bit_swap(r, -1, 0), usage_error);
}

TEST_CASE("U' commutes with every bit swap", "[full][symmetry][property]") {
    const int n = 4;
    const auto cfg = config(n);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (std::uint64_t seed = 0; seed < 20; ++seed) {
                const auto s = oracle::random_state(n, 500 + seed);
                const auto a = step(apply_bit_swap(s, i, j), cfg, true);
                const auto b = apply_bit_swap(step(s, cfg, true), i, j);
                worst = std::max(worst, max_abs_difference(a.amps(), b.amps()));
            }
    CHECK(worst <= 1e-12);
}

TEST_CASE("Fourier modes are eigenvectors of the unperturbed walk", "[full][spectrum]") {
    for (int n : {4, 6, 8}) {
        const auto cfg = config(n);
        double worst = 0.0;
        for (std::uint64_t kb = 0; kb < (std::uint64_t{1} << n); ++kb) {
            const int k = std::popcount(kb);
            for (int sign : {+1, -1}) {
                if ((k == 0 || k == n) && sign < 0) continue;
                const auto v = fourier_eigenvector(n, kb, sign);
                REQUIRE_THAT(v.norm(), WithinAbs(1.0, 1e-12));
                const cplx lambda(1.0 - 2.0 * k / n, sign * 2.0 / n * std::sqrt(double(k) * (n - k)));
                const auto uv = step(v, cfg, false);
                std::vector<cplx> diff(uv.size());
                for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = uv.amps()[i] - lambda * v.amps()[i];
                worst = std::max(worst, std::sqrt(norm_squared(diff)));
            }
        }
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("FullState JSON round trip", "[full][io][property]") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto s = oracle::random_state(3, seed);
        nlohmann::json j = s;
        CHECK(j.at("n") == 3);
        CHECK(j.at("amps").size() == 24);
        CHECK(full_state_from_json(nlohmann::json::parse(j.dump())) == s);
    }
    CHECK_THROWS_AS(FullState(3, std::vector<cplx>(23)), usage_error);
}
