#include <cmath>
#include <numbers>

#include "doctest.h"

#include "pstomo/error.hpp"
#include "pstomo/states.hpp"

using namespace pstomo;

TEST_CASE("haar_random_state rejects d = 0") {
    CHECK_THROWS_AS(haar_random_state(0, 1), DimensionError);
}

TEST_CASE("haar_random_state d = 1 has a unit-modulus amplitude") {
    const PureState s = haar_random_state(1, 7);
    CHECK(std::abs(std::abs(s[0]) - 1.0) < 1e-12);
}

TEST_CASE("haar_random_state is normalized and reproducible") {
    const PureState a = haar_random_state(5, 42);
    CHECK(std::abs(norm(a.amplitudes()) - 1.0) < 1e-12);
    const PureState b = haar_random_state(5, 42);
    for (std::size_t i = 0; i < 5; ++i) CHECK(a[i] == b[i]);
    const PureState c = haar_random_state(5, 43);
    CHECK(a[0] != c[0]);
}

TEST_CASE("Haar first moment E|c_k|^2 = 1/d") {
    // Monte-Carlo oracle: |c_1|^2 ~ Beta(1, d-1), variance (d-1)/(d^2 (d+1)).
    const std::size_t d = 4;
    const int n = 10000;
    double mean = 0.0;
    for (int s = 0; s < n; ++s) mean += std::norm(haar_random_state(d, 1000 + s)[0]);
    mean /= n;
    const double var = (d - 1.0) / (d * d * (d + 1.0));
    const double se = std::sqrt(var / n);
    CHECK(std::abs(mean - 0.25) < 5.0 * se);
}

TEST_CASE("Haar |c_k|^2 distribution is identical across k (chi-squared, 1% level)") {
    // Bin |c_k|^2 for each k into deciles of Beta(1, d-1): F(x) = 1 - (1-x)^{d-1}.
    const std::size_t d = 4;
    const int n = 10000;
    const int bins = 10;
    std::vector<std::vector<int>> counts(d, std::vector<int>(bins, 0));
    for (int s = 0; s < n; ++s) {
        const PureState st = haar_random_state(d, 50000 + s);
        for (std::size_t k = 0; k < d; ++k) {
            const double x = std::norm(st[k]);
            const double u = 1.0 - std::pow(1.0 - x, static_cast<double>(d - 1));
            counts[k][std::min(bins - 1, static_cast<int>(u * bins))]++;
        }
    }
    // Homogeneity test across the d rows: chi2 with (d-1)(bins-1) = 27 dof, 1% critical value 46.96.
    double chi2 = 0.0;
    for (int b = 0; b < bins; ++b) {
        double col = 0.0;
        for (std::size_t k = 0; k < d; ++k) col += counts[k][b];
        const double expected = col / d;
        for (std::size_t k = 0; k < d; ++k) chi2 += (counts[k][b] - expected) * (counts[k][b] - expected) / expected;
    }
    CHECK(chi2 < 46.96);
}

TEST_CASE("infidelity basics") {
    const PureState psi = haar_random_state(6, 3);
    CHECK(infidelity(psi, psi) < 1e-12);

    CVector rotated(psi.amplitudes().begin(), psi.amplitudes().end());
    for (Complex& z : rotated) z *= std::polar(1.0, 1.234);
    CHECK(infidelity(psi, PureState(rotated)) < 1e-12);

    CHECK(infidelity(PureState::basis_state(3, 1), PureState::basis_state(3, 2)) == 1.0);
    CHECK_THROWS_AS(infidelity(PureState::basis_state(3, 1), PureState::basis_state(4, 1)), DimensionError);
}

TEST_CASE("infidelity is symmetric and bounded") {
    for (int s = 0; s < 200; ++s) {
        const PureState a = haar_random_state(7, 2 * s);
        const PureState b = haar_random_state(7, 2 * s + 1);
        const double ab = infidelity(a, b);
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
        CHECK(std::abs(ab - infidelity(b, a)) < 1e-15);
    }
}

TEST_CASE("PureState validation") {
    CHECK_THROWS_AS(PureState(CVector{}), DimensionError);
    CHECK_THROWS_AS(PureState(CVector{1.0, 1.0}), ValueError);
    CHECK_THROWS_AS(PureState::normalized(CVector{0.0, 0.0}), ValueError);
    const PureState s = PureState::normalized(CVector{3.0, Complex(0.0, 4.0)});
    CHECK(std::abs(s[0] - 0.6) < 1e-15);
}

TEST_CASE("canonical global phase makes the largest amplitude real non-negative") {
    CVector v{Complex(0.1, 0.2), Complex(0.0, -0.9), Complex(0.3, 0.0)};
    const PureState s = PureState::normalized(v).canonical();
    CHECK(s[1].imag() == 0.0);
    CHECK(s[1].real() > 0.0);
    CHECK(infidelity(s, PureState::normalized(v)) < 1e-15);
}

TEST_CASE("NoisyState lambda range") {
    const PureState s = PureState::basis_state(2, 1);
    CHECK_NOTHROW(NoisyState(s, 0.0));
    CHECK_NOTHROW(NoisyState(s, 1.0));
    CHECK_THROWS_AS(NoisyState(s, -0.1), ValueError);
    CHECK_THROWS_AS(NoisyState(s, 1.1), ValueError);
}
