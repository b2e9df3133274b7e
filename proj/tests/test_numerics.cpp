#include <doctest.h>

#include <cmath>

#include "pesym/numerics.hpp"

using namespace pesym;

TEST_CASE("scalar functions evaluate their derivatives analytically") {
    const ScalarFn p = ScalarFn::poly({1.0, -2.0, 0.5, 3.0});  // 1 - 2x + x^2/2 + 3x^3
    CHECK(p(2.0) == doctest::Approx(1 - 4 + 2 + 24));
    CHECK(p.d1(2.0) == doctest::Approx(-2 + 2 * 0.5 * 2 + 9 * 4));
    CHECK(p.d2(2.0) == doctest::Approx(1.0 + 18 * 2));
    CHECK(p.d3(2.0) == doctest::Approx(18.0));

    const ScalarFn s = ScalarFn::sinusoid(2.0, 3.0, 0.25);
    const double x = 0.7;
    CHECK(s.d1(x) == doctest::Approx(2.0 * 3.0 * std::cos(3 * x + 0.25)));
    CHECK(s.d2(x) == doctest::Approx(-2.0 * 9.0 * std::sin(3 * x + 0.25)));
    CHECK(s.d3(x) == doctest::Approx(-2.0 * 27.0 * std::cos(3 * x + 0.25)));
    CHECK(ScalarFn().is_zero());
}

TEST_CASE("adaptive Simpson reaches the requested tolerance") {
    const double v = adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
    CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
    const double w = simpson_doubling([](double x) { return 1.0 / x; }, 1.0, 2.0, 1e-12);
    CHECK(w == doctest::Approx(std::log(2.0)).epsilon(1e-11));
    CHECK(adaptive_simpson([](double x) { return x; }, 1.0, 1.0) == 0.0);
}

TEST_CASE("fixed-step RK4 shows fourth-order convergence on a stiff-free problem") {
    auto rhs = [](double t, const double* y, double* dy) {
        dy[0] = -y[0] + std::sin(t);
    };
    auto solve = [&](int steps) {
        std::vector<double> y{1.0};
        rk4_integrate(rhs, 0.0, 2.0, steps, y);
        return y[0];
    };
    const double exact = 1.5 * std::exp(-2.0) + 0.5 * (std::sin(2.0) - std::cos(2.0));
    const double e1 = std::abs(solve(40) - exact);
    const double e2 = std::abs(solve(80) - exact);
    CHECK(e1 / e2 > 12.0);  // ~16 for order 4
    CHECK(e2 < 1e-7);
}

TEST_CASE("matrix helpers invert and compose") {
    const Mat2 R = Mat2::rotation(0.6);
    const Mat2 I = R.mul(R.inverse());
    CHECK(I.a == doctest::Approx(1.0));
    CHECK(I.b == doctest::Approx(0.0));
    CHECK(std::abs(R.det() - 1.0) < 1e-15);

    Mat9 M = Mat9::identity();
    M.at(0, 4) = 2.0;
    M.at(3, 3) = 0.5;
    M.at(7, 1) = -1.25;
    const Mat9 P = M.mul(M.inverse());
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) CHECK(P.at(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
}

TEST_CASE("random stream is deterministic and in range") {
    RandomStream a(42), b(42), c(43);
    bool same = true, differ = false;
    for (int i = 0; i < 100; ++i) {
        const double va = a.next_in(-2.0, 3.0);
        const double vb = b.next_in(-2.0, 3.0);
        const double vc = c.next_in(-2.0, 3.0);
        same = same && va == vb;
        differ = differ || va != vc;
        CHECK(va >= -2.0);
        CHECK(va < 3.0);
    }
    CHECK(same);
    CHECK(differ);
}
