#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lcv/errors.hpp"
#include "lcv/poisson_magri.hpp"

using namespace lcv;

namespace {
constexpr double pi = std::numbers::pi;
const int N = 32;
const double kC = std::numbers::sqrt2;

SpectralField fn(double (*f)(double, double)) { return SpectralField::from_function(N, N, f); }

Functional gradient_only(Functional::GradientFn grad) {
    return Functional("test", std::move(grad),
                      [](const SpectralField&, const SpectralField&) { return 0.0; });
}
}  // namespace

TEST_CASE("casimir H0: value and gradient") {
    const Functional h0 = casimir_h0();

    SpectralField one(N, N);
    one.at(0, 0) = 1.0;
    CHECK(h0.value(one, one) == doctest::Approx(0.0));

    // value at (sin x, 2) = (2π)²·2
    SpectralField two(N, N);
    two.at(0, 0) = 2.0;
    const SpectralField sinx = fn([](double x, double) { return std::sin(x); });
    CHECK(h0.value(sinx, two) == doctest::Approx(8.0 * pi * pi).epsilon(1e-13));

    const GradientPair d = h0.gradient(sinx, two);
    SpectralField plus_one(N, N), minus_one(N, N);
    plus_one.at(0, 0) = 1.0;
    minus_one.at(0, 0) = -1.0;
    CHECK(l2_norm(d.da - plus_one) < 1e-14);
    CHECK(l2_norm(d.df - minus_one) < 1e-14);
}

TEST_CASE("ham_lie(H0) reproduces the translation field, charges included") {
    const Functional h0 = casimir_h0();
    const SpectralField f = random_field(31, 4, 1.0, N, N);
    const SpectralField a = random_field(32, 4, 1.0, N, N);
    for (double c2 : {0.0, 1.0}) {
        const TangentField x = ham_lie(h0, DualPoint(f, a, 0.0, c2));
        CHECK(l2_norm(x.ft - derive(f, Axis::X)) < 1e-13);
        CHECK(l2_norm(x.at - (2.0 * derive(f, Axis::X) + derive(a, Axis::X))) < 1e-13);
    }
}

TEST_CASE("ham_const display") {
    // Constant gradients: H0 is a Casimir of the frozen structure.
    const Functional h0 = casimir_h0();
    const FrozenPoint fp{kC, 0.0};
    const SpectralField f = random_field(33, 4, 1.0, N, N);
    const TangentField x = ham_const(h0, fp, f, f);
    CHECK(tangent_norm(x) < 1e-14);

    // δ_aH = sin x, δ_fH = 0, c = 0 → f_t = −cos x, a_t = 2cos x.
    auto grad = [](const SpectralField& g, const SpectralField&) -> GradientPair {
        return {SpectralField::from_function(g.nx(), g.ny(),
                                             [](double x_, double) { return std::sin(x_); }),
                SpectralField(g.nx(), g.ny())};
    };
    const Functional h = gradient_only(grad);
    const TangentField y = ham_const(h, FrozenPoint{0.0, 0.0}, f, f);
    CHECK(l2_norm(y.ft - fn([](double x_, double) { return -std::cos(x_); })) < 1e-13);
    CHECK(l2_norm(y.at - fn([](double x_, double) { return 2.0 * std::cos(x_); })) < 1e-13);
}

TEST_CASE("ham_const is linear in the functional") {
    const FrozenPoint fp{kC, 0.0};
    const SpectralField f = random_field(34, 3, 1.0, N, N);
    const SpectralField a = random_field(35, 3, 1.0, N, N);
    const Functional h1 = h1_closed_form(kC);
    const Functional h0 = casimir_h0();
    auto sum_grad = [&](const SpectralField& ff, const SpectralField& aa) -> GradientPair {
        const GradientPair d1 = h1.gradient(ff, aa);
        const GradientPair d0 = h0.gradient(ff, aa);
        return {d1.da + d0.da, d1.df + d0.df};
    };
    const Functional sum = gradient_only(sum_grad);
    const TangentField lhs = ham_const(sum, fp, f, a);
    const TangentField r1 = ham_const(h1, fp, f, a);
    const TangentField r0 = ham_const(h0, fp, f, a);
    CHECK(l2_norm(lhs.ft - r1.ft - r0.ft) < 1e-13);
    CHECK(l2_norm(lhs.at - r1.at - r0.at) < 1e-13);
}

TEST_CASE("ham_limit") {
    const Functional h0 = casimir_h0();
    const SpectralField f = random_field(36, 3, 1.0, N, N);
    CHECK(tangent_norm(ham_limit(h0, f, f)) < 1e-14);

    auto grad = [](const SpectralField& g, const SpectralField&) -> GradientPair {
        return {SpectralField::from_function(g.nx(), g.ny(),
                                             [](double, double y_) { return std::sin(y_); }),
                SpectralField(g.nx(), g.ny())};
    };
    const TangentField x = ham_limit(gradient_only(grad), f, f);
    CHECK(l2_norm(x.ft - fn([](double, double y_) { return std::cos(y_); })) < 1e-13);
    CHECK(l2_norm(x.at) < 1e-14);
}

TEST_CASE("magri_step inverts the frozen display") {
    const FrozenPoint fp{kC, 0.0};
    const SpectralField f = random_field(37, 4, 1.0, N, N);
    const SpectralField a = random_field(38, 4, 1.0, N, N);

    // X_{H0} → the closed-form H1 gradient.
    const TangentField x0{derive(f, Axis::X), 2.0 * derive(f, Axis::X) + derive(a, Axis::X)};
    const GradientPair step = magri_step(x0, fp);
    const GradientPair closed = h1_closed_form(kC).gradient(f, a);
    CHECK(l2_norm(step.da - closed.da) < 1e-12);
    CHECK(l2_norm(step.df - closed.df) < 1e-12);

    // Zero tangent → zero gradient.
    const GradientPair z = magri_step(TangentField{SpectralField(N, N), SpectralField(N, N)}, fp);
    CHECK(l2_norm(z.da) == 0.0);
    CHECK(l2_norm(z.df) == 0.0);

    // Round-trip: ham_const(gradient) recovers the tangent.
    const Functional back = gradient_only(
        [step](const SpectralField&, const SpectralField&) -> GradientPair { return step; });
    const TangentField redo = ham_const(back, fp, f, a);
    CHECK(tangent_rel_defect(redo, x0) < 1e-12);
}

TEST_CASE("h1 closed form value conventions") {
    const Functional h1 = h1_closed_form(kC);
    const SpectralField zero(N, N);
    const SpectralField a = random_field(39, 4, 1.0, N, N);
    CHECK(h1.value(zero, a) == doctest::Approx(0.0));
}

TEST_CASE("magri_reconstruct matches exact values at k = 0 and scales consistently") {
    Hierarchy::Options options;
    options.fp = FrozenPoint{kC, 0.0};
    Hierarchy hierarchy(options);

    const SpectralField f = random_field(40, 3, 0.8, N, N);
    const SpectralField a = random_field(41, 3, 0.6, N, N);

    // H0 is linear: the homotopy of the constant gradient is ∫(a − f).
    const double exact = casimir_h0().value(f, a);
    const double via_homotopy = [&] {
        std::vector<double> nodes, weights;
        gauss_legendre_01(32, nodes, weights);
        double sum = 0.0;
        for (int i = 0; i < 32; ++i) {
            const GradientPair d = hierarchy.h(0).gradient(nodes[i] * f, nodes[i] * a);
            sum += weights[i] * (inner(d.df, f) + inner(d.da, a));
        }
        return sum;
    }();
    CHECK(via_homotopy == doctest::Approx(exact).epsilon(1e-12));

    // H1(2f, 2a) computed directly vs the homotopy value at doubled amplitude.
    const Functional h1 = hierarchy.h(1);
    const double doubled = h1.value(2.0 * f, 2.0 * a);
    const double closed = h1_closed_form(kC).value(2.0 * f, 2.0 * a);
    CHECK(std::abs(doubled - closed) < 1e-7 * (1.0 + std::abs(closed)));
}

TEST_CASE("hierarchy depth is capped") {
    Hierarchy::Options options;
    options.fp = FrozenPoint{kC, 0.0};
    Hierarchy hierarchy(options);
    CHECK_THROWS_AS((void)hierarchy.h(4), ConfigError);
    CHECK_NOTHROW((void)hierarchy.h(3));
}

TEST_CASE("resonant c obstructs the recursion with a mode list") {
    // c = 1 puts (k, k) modes on the kernel of Λ; the construction-time
    // gradient validation already trips over them.
    CHECK_THROWS_AS((void)h1_closed_form(1.0), ResonanceError);
    try {
        (void)h1_closed_form(1.0);
    } catch (const ResonanceError& err) {
        CHECK(!err.modes.empty());
        for (auto [kx, ky] : err.modes) CHECK(kx == ky);
    }

    // magri_step hits the same obstruction directly.
    const SpectralField diag = fn([](double x_, double y_) { return std::cos(x_ + y_); });
    const TangentField xk{diag, SpectralField(N, N)};
    CHECK_THROWS_AS((void)magri_step(xk, FrozenPoint{1.0, 0.0}), ResonanceError);
}

TEST_CASE("pencil at lambda = 0 reduces to the constant-bracket Jacobi identity") {
    const FrozenPoint fp{kC, 0.0};
    const int grid = 16;
    auto linear_functional = [&](std::uint64_t salt) {
        SpectralField xf = random_field(salt, 2, 1.0, grid, grid);
        SpectralField xa = random_field(salt + 1, 2, 1.0, grid, grid);
        auto gradient = [xf, xa](const SpectralField&, const SpectralField&) -> GradientPair {
            return {xf, xa};
        };
        auto value = [xf, xa](const SpectralField& ff, const SpectralField& aa) -> double {
            return inner(xf, aa) + inner(ff, xa);
        };
        return Functional("L", std::move(gradient), std::move(value));
    };
    const Functional F = linear_functional(61);
    const Functional G = linear_functional(63);
    const Functional H = linear_functional(65);
    const DualPoint m(random_field(67, 3, 1.0, grid, grid), random_field(68, 3, 1.0, grid, grid),
                      0.2, -0.4);
    CHECK(pencil_jacobi_defect(0.0, F, G, H, m, fp) < 1e-9);
}

TEST_CASE("gradient validation rejects a wrong gradient program") {
    auto bad_gradient = [](const SpectralField& f, const SpectralField& a) -> GradientPair {
        (void)a;
        SpectralField one(f.nx(), f.ny());
        one.at(0, 0) = 2.0;  // wrong: claims δ_a = 2
        SpectralField minus(f.nx(), f.ny());
        minus.at(0, 0) = -1.0;
        return {one, minus};
    };
    auto value = [](const SpectralField& f, const SpectralField& a) -> double {
        const double two_pi_sq = 4.0 * pi * pi;
        return two_pi_sq * (a.at(0, 0).real() - f.at(0, 0).real());
    };
    const Functional wrong("wrong", bad_gradient, value);
    CHECK_THROWS_AS(validate_gradient(wrong, 24, 24, 3), StructuralBugError);
}
