#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "heunflow/jacobi_operator.hpp"
#include "heunflow/perturbation.hpp"
#include "reference_series.hpp"

using namespace heunflow;
using Catch::Approx;

TEST_CASE("kappa lambda-series reproduce the tabulated low orders exactly") {
    for (const auto& pub : testing::reference_kappa_series()) {
        const int order = static_cast<int>(pub.coeffs.size()) - 1;
        const auto s = kappa_series(pub.m, pub.n, order, Variable::lambda);
        INFO("m=" << pub.m << " n=" << pub.n);
        REQUIRE(s.order() == order);
        for (int k = 0; k <= order; ++k) {
            INFO("order " << k);
            CHECK(s.at(k) == Rational(pub.coeffs[static_cast<std::size_t>(k)]));
        }
    }
}

TEST_CASE("ground-state 2q-1 is odd in epsilon") {
    const auto s = rs_expand(0, 0, 20);
    REQUIRE(s.min_power == 0);
    for (int k = 0; k <= 20; k += 2) CHECK(s.at(k) == 0);
    CHECK(s.at(1) == Rational(-1, 6));
    CHECK(s.at(3) == Rational(-49, 1080));
}

TEST_CASE("constant terms equal the IR spectrum") {
    for (int m = 0; m <= 4; ++m)
        for (int n = 0; n <= 3; ++n) {
            const auto s = kappa_series(m, n, 2, Variable::lambda);
            const int t = 2 * n + m + 1;
            CHECK(s.at(0) == Rational(6 * (t * t - m * m)));
        }
}

TEST_CASE("first-order coefficient of the ground state is -12 m/(m+2)") {
    for (int m = 0; m <= 6; ++m) {
        const auto s = kappa_series(m, 0, 1, Variable::lambda);
        CHECK(s.at(0) == Rational(6 * (1 + 2 * m)));
        CHECK(s.at(1) == Rational(-12 * m) / (m + 2));
    }
}

TEST_CASE("first-order excited coefficient matches the general j formula") {
    // (2j+1)^2 - m^2 - [4j(j+1) - m^2]^2 / (8 j (j+1)) lambda, j = m/2 + n
    for (int m = 0; m <= 3; ++m)
        for (int n = 1; n <= 3; ++n) {
            const Rational j = Rational(m) / 2 + n;
            const Rational t = 4 * j * (j + 1) - m * m;
            const auto s = kappa_series(m, n, 1, Variable::lambda);
            CHECK(s.at(1) == -6 * t * t / (8 * j * (j + 1)));
        }
}

TEST_CASE("excited levels carry a simple pole in epsilon") {
    const auto s = rs_expand(0, 1, 5);
    CHECK(s.min_power == -1);
    CHECK(s.at(-1) == Rational(2));  // n(n+m+1) with n = 1, m = 0
    CHECK_THROWS_AS(rs_expand(0, 0, 0), DomainError);
    CHECK_THROWS_AS(rs_expand(-1, 0, 3), DomainError);
}

TEST_CASE("floating recursion with symmetric V matches the exact one") {
    for (int m : {0, 1, 3})
        for (int n : {0, 1, 2}) {
            const auto exact = rs_deltas(m, n, 8);
            const auto fl = rs_deltas_float(m, n, 8);
            for (std::size_t k = 0; k < exact.size(); ++k) {
                const double e = exact[k].get_d();
                CHECK(static_cast<double>(fl[k]) == Approx(e).margin(1e-12).epsilon(1e-12));
            }
        }
    const auto kf = kappa_lambda_float(0, 0, 10);
    const auto ke = kappa_series(0, 0, 10, Variable::lambda);
    for (int k = 0; k <= 10; ++k)
        CHECK(static_cast<double>(kf[static_cast<std::size_t>(k)]) == Approx(ke.at(k).get_d()).margin(1e-14));
}

TEST_CASE("epsilon and lambda kappa series describe the same function") {
    const auto ke = kappa_series(1, 0, 30, Variable::epsilon);
    const auto kl = kappa_series(1, 0, 30, Variable::lambda);
    const double lam = 0.2;
    const double eps = lam / (2.0 - lam);
    CHECK(sum_series(ke, eps).value == Approx(sum_series(kl, lam).value).epsilon(1e-12));
}

TEST_CASE("sum_series") {
    const auto k = kappa_series(0, 0, 10, Variable::lambda);
    CHECK(sum_series(k, 0.0).value == 6.0);
    CHECK(sum_series(k, 0.0).tail_est == 0.0);
    const auto r = sum_series(k, 0.5);
    CHECK(r.value == Approx(5.6559).margin(2e-4));
    CHECK(r.tail_est == Approx(1e-4).epsilon(0.5));
    CHECK_THROWS_AS(sum_series(k, 1.0), DomainError);
    CHECK_THROWS_AS(sum_series(k, -0.1), DomainError);
    CHECK_THROWS_AS(sum_series(rs_expand(0, 2, 4), 0.0), DomainError);

    double prev = INFINITY;
    for (int order = 1; order <= 10; ++order) {
        const double v = sum_series(kappa_series(0, 0, order, Variable::lambda), 0.5).value;
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("truncated series agrees with the matrix at small lambda") {
    const double u = -1.0;
    const double lam = derive_params(u, 0).lambda();
    const double mat = spectrum_matrix(u, 0, 1, 1e-13).levels[0];
    for (int order : {2, 4, 6}) {
        const double s = sum_series(kappa_series(0, 0, order, Variable::lambda), lam).value;
        CHECK(std::abs(s - mat) < 4.0 * std::pow(lam, order + 1) + 1e-13);
    }
}

TEST_CASE("coefficient ratios of kappa_00 drift toward 1") {
    const auto c = kappa_lambda_float(0, 0, 80);
    const auto r = coefficient_ratios(std::vector<long double>(c.begin() + 2, c.end()));
    REQUIRE(r.size() > 60);
    for (std::size_t k = 20; k < r.size(); ++k) {
        CHECK(r[k] > 0.9);
        CHECK(r[k] < 1.05);
    }
    CHECK(std::abs(1.0 - static_cast<double>(r.back())) < std::abs(1.0 - static_cast<double>(r[5])));
}

TEST_CASE("Upsilon series") {
    const auto s = rs_expand(0, 0, 42);
    const auto u = upsilon_series(s, 40);
    for (int k = 1; k <= 40; k += 2) CHECK(u.f[static_cast<std::size_t>(k)] == 0);
    CHECK(u.a0 == Rational(2, 3));

    const auto rows = upsilon_analysis(s, 40);
    CHECK(rows.front().order == 0);
    CHECK(rows.front().asymptote == Approx(1.0 / M_PI));
    CHECK(rows.front().coeff == Approx(std::sqrt(1.5)));
    // deviation shrinks with the order
    CHECK(std::abs(rows.back().rel_dev) < std::abs(rows[2].rel_dev));
    CHECK(std::abs(rows.back().rel_dev) < 0.05);

    CHECK_THROWS_AS(upsilon_series(s, 8), DomainError);
    CHECK_THROWS_AS(upsilon_series(rs_expand(0, 0, 11), 20), DomainError);
    CHECK_THROWS_AS(upsilon_series(rs_expand(1, 0, 30), 20), DomainError);
}

TEST_CASE("reexpand_lambda rejects non-epsilon input") {
    const auto l = reexpand_lambda(rs_expand(0, 0, 6));
    CHECK_THROWS_AS(reexpand_lambda(l), DomainError);
    CHECK_THROWS_AS(to_kappa(kappa_series(0, 0, 4, Variable::lambda)), DomainError);
}
