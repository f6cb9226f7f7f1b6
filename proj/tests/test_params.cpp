#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "heunflow/params.hpp"

using namespace heunflow;
using Catch::Approx;

TEST_CASE("derive_params at u = 0 and u = log(3)/4") {
    const auto p = derive_params(0.0, 0);
    CHECK(p.lambda() == Approx(0.5).epsilon(1e-15));
    CHECK(p.epsilon() == Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(p.w() == Approx(-1.0).epsilon(1e-15));

    const auto q = derive_params(0.25 * std::log(3.0), 0);
    CHECK(q.lambda() == Approx(0.75).epsilon(1e-14));
    CHECK(q.epsilon() == Approx(0.6).epsilon(1e-14));
    CHECK(q.w() == Approx(-1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("derive_params limits and guards") {
    const auto ir = derive_params(-60.0, 0);
    CHECK(ir.lambda() < 1e-100);
    CHECK(ir.epsilon() < 1e-100);
    CHECK(ir.w() < -1e100);

    const auto uv = derive_params(100.0, 2);
    CHECK(uv.lambda() == 1.0);
    CHECK(uv.one_minus_lambda() > 0.0);
    CHECK(std::isfinite(derive_params(-300.0, 0).lambda()));
    CHECK(derive_params(-300.0, 0).lambda() == 0.0);

    CHECK_THROWS_AS(derive_params(NAN, 0), DomainError);
    CHECK_THROWS_AS(derive_params(INFINITY, 0), DomainError);
    CHECK_THROWS_AS(derive_params(0.0, -1), DomainError);
}

TEST_CASE("lambda and epsilon are mutual inverses", "[property]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uu(-8.0, 8.0);
    for (int i = 0; i < 500; ++i) {
        const auto p = derive_params(uu(rng), 0);
        CHECK(lambda_from_epsilon(p.epsilon()) == Approx(p.lambda()).epsilon(1e-14));
        CHECK(epsilon_from_lambda(p.lambda()) == Approx(p.epsilon()).epsilon(1e-14));
        CHECK(p.w() == Approx(-p.one_minus_lambda() / p.lambda()).epsilon(1e-12));
    }
}

TEST_CASE("kappa_from_q") {
    CHECK(kappa_from_q(0.5, -1.0, 0) == Approx(6.0).epsilon(1e-15));
    CHECK(kappa_from_q(0.25, -1e-12, 0) == Approx(0.0).margin(1e-10));
    CHECK_THROWS_AS(kappa_from_q(0.3, 1.0, 0), DomainError);

    const double w = -std::exp(-40.0);
    const double kappa = 19.0 * 6.0;
    CHECK(kappa_from_q(q_from_kappa(kappa, w, 10), w, 10) == Approx(kappa).epsilon(1e-13));
}

TEST_CASE("scaled-eigenvalue bridge agrees with the q bridge") {
    for (double u : {-3.0, -0.5, 0.0, 0.7, 2.0}) {
        for (int m : {0, 1, 4}) {
            const auto p = derive_params(u, m);
            const double q = 0.37 + 0.1 * m;
            const double E = p.epsilon() * (2.0 * q - m - 1.0);
            CHECK(kappa_from_scaled_eigenvalue(E, p.epsilon(), m) == Approx(kappa_from_q(q, p.w(), m)).epsilon(1e-12));
        }
    }
}

TEST_CASE("sausage_map fixed point, substitution and involution") {
    const auto f = sausage_map(1.0, 2.0);
    CHECK(f.q == Approx(1.0));
    CHECK(f.w == Approx(2.0));

    const auto s = sausage_map(0.5, -1.0);
    CHECK(s.q == Approx(0.75));
    CHECK(s.w == Approx(0.5));

    const auto once = sausage_map(0.3, -5.0);
    const auto twice = sausage_map(once);
    CHECK(twice.q == Approx(0.3).epsilon(1e-14));
    CHECK(twice.w == Approx(-5.0).epsilon(1e-14));

    CHECK_THROWS_AS(sausage_map(0.2, 1.0), DomainError);
}

TEST_CASE("sausage_map is an involution for every m", "[property]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> qd(-5.0, 5.0), wd(-20.0, 0.9);
    for (int i = 0; i < 300; ++i) {
        const int m = i % 6;
        const double q = qd(rng), w = wd(rng);
        const auto back = sausage_map(sausage_map(q, w, m), m);
        CHECK(back.q == Approx(q).margin(1e-12).epsilon(1e-12));
        CHECK(back.w == Approx(w).margin(1e-12).epsilon(1e-12));
    }
}

TEST_CASE("sausage q-kappa bridge round trip") {
    const double w = std::exp(4.0 * 0.8);
    for (int m : {0, 2}) {
        const double q = sausage_q_from_kappa(2.5, w, m);
        CHECK(sausage_kappa_from_q(q, w, m) == Approx(2.5).epsilon(1e-13));
    }
    CHECK_THROWS_AS(sausage_kappa_from_scaled_eigenvalue(0.0, 0.0, 0), DomainError);
}
