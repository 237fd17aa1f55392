#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "mfree/problems.hpp"

using namespace mfree;

namespace {

/// Fourth-order central difference Laplacian of a scalar field in 2D.
template <class F>
double fd_laplacian(F f, const Vec2& x, double h) {
    double acc = 0;
    for (int a = 0; a < 2; ++a) {
        Vec2 e = Vec2::Zero();
        e[a] = h;
        acc += (-f(x + 2 * e) + 16 * f(x + e) - 30 * f(x) + 16 * f(x - e) - f(x - 2 * e)) /
               (12 * h * h);
    }
    return acc;
}

/// Fourth-order FD Cauchy-Navier residual (lambda+mu) grad div u + mu lap u.
Vec3 fd_cauchy_navier(const BoussinesqProblem& prob, const Vec3& x, double h) {
    auto u = [&](const Vec3& p) { return prob.displacement(p); };
    auto second = [&](int a, int b, int comp) {
        Vec3 ea = Vec3::Zero(), eb = Vec3::Zero();
        ea[a] = h;
        eb[b] = h;
        if (a == b)
            return (-u(x + 2 * ea)[comp] + 16 * u(x + ea)[comp] - 30 * u(x)[comp] +
                    16 * u(x - ea)[comp] - u(x - 2 * ea)[comp]) /
                   (12 * h * h);
        // fourth-order cross derivative from two nested central differences
        auto d_a = [&](const Vec3& p) {
            return (-u(p + 2 * ea)[comp] + 8 * u(p + ea)[comp] - 8 * u(p - ea)[comp] +
                    u(p - 2 * ea)[comp]) /
                   (12 * h);
        };
        return (-d_a(x + 2 * eb) + 8 * d_a(x + eb) - 8 * d_a(x - eb) + d_a(x - 2 * eb)) / (12 * h);
    };
    const double lambda = prob.lame_lambda(), mu = prob.lame_mu();
    Vec3 out;
    for (int a = 0; a < 3; ++a) {
        double lap = 0, graddiv = 0;
        for (int b = 0; b < 3; ++b) {
            lap += second(b, b, a);
            graddiv += second(a, b, b);
        }
        out[a] = (lambda + mu) * graddiv + mu * lap;
    }
    return out;
}

}  // namespace

TEST_CASE("Poisson closed forms at distinguished points") {
    PoissonProblem prob;
    CHECK(prob.u(prob.source) == 1.0);
    CHECK(prob.f_lap(prob.source) == -4.0 * prob.alpha);
    // one hand-evaluated off-center point: r2 = 0.02
    const Vec2 p(0.6, 0.6);
    const double r2 = 0.02;
    // roundoff in r2 is amplified by the factor alpha in the exponent
    CHECK(prob.u(p) == Catch::Approx(std::exp(-1e3 * r2)).epsilon(1e-11));
    CHECK(prob.f_lap(p) ==
          Catch::Approx(4.0 * (1e6 * r2 - 1e3) * std::exp(-1e3 * r2)).epsilon(1e-11));
}

TEST_CASE("Poisson forcing matches a finite-difference Laplacian of u") {
    PoissonProblem prob;
    std::mt19937_64 rng(5);
    // sample near the source, where the forcing has meaningful magnitude;
    // skip the thin annulus where f_lap crosses zero and a relative check
    // degenerates
    std::uniform_real_distribution<double> rad(0.02, 0.08);
    std::uniform_real_distribution<double> ang(0.0, 2 * M_PI);
    auto u = [&](const Vec2& x) { return prob.u(x); };
    int checked = 0;
    while (checked < 100) {
        const double r = rad(rng), th = ang(rng);
        const Vec2 x = prob.source + r * Vec2(std::cos(th), std::sin(th));
        const double exact = prob.f_lap(x);
        if (std::abs(prob.alpha * r * r - 1.0) < 0.1) continue;
        const double fd = fd_laplacian(u, x, 1e-3);
        CHECK(std::abs(fd - exact) <= 1e-5 * std::abs(exact));
        ++checked;
    }
    CHECK(checked == 100);
}

TEST_CASE("elastic moduli follow the standard conversion") {
    BoussinesqProblem prob;
    const double e = 1.0, nu = 0.33;
    CHECK(prob.lame_mu() == Catch::Approx(e / (2 * (1 + nu))).epsilon(1e-15));
    CHECK(prob.lame_lambda() ==
          Catch::Approx(e * nu / ((1 + nu) * (1 - 2 * nu))).epsilon(1e-15));

    BoussinesqProblem stiff;
    stiff.youngs = 210.0;
    stiff.poisson_ratio = 0.25;
    // nu = 1/4: lambda = mu = E/2.5
    CHECK(stiff.lame_lambda() == Catch::Approx(210.0 / 2.5).epsilon(1e-14));
    CHECK(stiff.lame_mu() == Catch::Approx(210.0 / 2.5).epsilon(1e-14));
}

TEST_CASE("point-load displacement solves the homogeneous Cauchy-Navier equations") {
    BoussinesqProblem prob;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> coord(-1.0, -0.1);
    // residual of the FD-applied operator should shrink as the step shrinks,
    // confirming the true residual is zero away from the singular point
    for (int rep = 0; rep < 20; ++rep) {
        Vec3 x(coord(rng), coord(rng), coord(rng));
        if (x.norm() < 0.3) continue;
        const double coarse = fd_cauchy_navier(prob, x, 1e-2).norm();
        const double fine = fd_cauchy_navier(prob, x, 2.5e-3).norm();
        const double scale = prob.displacement(x).norm() / x.squaredNorm();
        INFO("x = " << x.transpose() << " coarse " << coarse << " fine " << fine);
        CHECK(fine < 1e-6 * scale + 0.9 * coarse);
        CHECK(fine < 1e-4 * scale);
    }
}

TEST_CASE("displacement scales linearly with the load and decays with distance") {
    BoussinesqProblem one;
    BoussinesqProblem five = one;
    five.load = 5.0;
    const Vec3 x(-0.4, -0.3, -0.5);
    CHECK((five.displacement(x) - 5.0 * one.displacement(x)).norm() < 1e-15);
    CHECK(one.displacement(2 * x).norm() < one.displacement(x).norm());
}
