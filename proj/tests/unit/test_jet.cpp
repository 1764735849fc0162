#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lcv/errors.hpp"
#include "lcv/jet.hpp"

using namespace lcv;
using namespace lcv::jet;

namespace {
const JetVariable F0{FieldId::F, 0, 0};
const JetVariable A0{FieldId::A, 0, 0};

DiffPoly var(FieldId f, int px, int py) { return DiffPoly::variable({f, px, py}); }
}  // namespace

TEST_CASE("total derivative basics") {
    // D_x(f) = f_x
    CHECK(total_derivative(DiffPoly::field(FieldId::F), Axis::X) == var(FieldId::F, 1, 0));

    // D_x(f·a_x) = f_x·a_x + f·a_xx
    const DiffPoly p = DiffPoly::field(FieldId::F) * var(FieldId::A, 1, 0);
    const DiffPoly expected =
        var(FieldId::F, 1, 0) * var(FieldId::A, 1, 0) + DiffPoly::field(FieldId::F) * var(FieldId::A, 2, 0);
    CHECK(total_derivative(p, Axis::X) == expected);

    // D_y(∂x⁻¹ f) = ∂x⁻¹(f_y): the commuting-operator convention.
    CHECK(total_derivative(var(FieldId::F, -1, 0), Axis::Y) == var(FieldId::F, -1, 1));

    // D_x(∂x⁻¹ f) = f: mixed orders cancel.
    CHECK(total_derivative(var(FieldId::F, -1, 0), Axis::X) == DiffPoly::field(FieldId::F));
}

TEST_CASE("order cap raises a structured error naming the monomial") {
    DiffPoly p = var(FieldId::F, 8, 0);
    CHECK_THROWS_AS((void)total_derivative(p, Axis::X), OrderCapError);
    try {
        (void)total_derivative(p, Axis::X);
    } catch (const OrderCapError& err) {
        CHECK(err.monomial.find("F[8,0]") != std::string::npos);
    }
    // A larger cap admits it.
    CHECK(total_derivative(p, Axis::X, 12) == var(FieldId::F, 9, 0));
}

TEST_CASE("variational derivative examples") {
    // h = a − f
    const DiffPoly h0 = DiffPoly::field(FieldId::A) - DiffPoly::field(FieldId::F);
    CHECK(variational_derivative(h0, FieldId::A) == DiffPoly::constant(1));
    CHECK(variational_derivative(h0, FieldId::F) == DiffPoly::constant(-1));

    // h = f² → 2f
    const DiffPoly f = DiffPoly::field(FieldId::F);
    CHECK(variational_derivative(f * f, FieldId::F) == Rational(2) * f);

    // h = f·a_x → δ_a = −f_x
    const DiffPoly h = f * var(FieldId::A, 1, 0);
    CHECK(variational_derivative(h, FieldId::A) == -var(FieldId::F, 1, 0));

    // Nonlocal: h = ∂x⁻¹f · a → δ_f = −∂x⁻¹a (sign from the odd order).
    const DiffPoly hn = var(FieldId::F, -1, 0) * DiffPoly::field(FieldId::A);
    CHECK(variational_derivative(hn, FieldId::F) == -var(FieldId::A, -1, 0));
}

TEST_CASE("antiderivative of a genuine product is rejected") {
    const DiffPoly p = DiffPoly::field(FieldId::F) * DiffPoly::field(FieldId::A);
    CHECK_THROWS_AS((void)total_antiderivative(p, Axis::X), UnsupportedInputError);
}

TEST_CASE("ibp normal form") {
    const DiffPoly f = DiffPoly::field(FieldId::F);
    const DiffPoly a = DiffPoly::field(FieldId::A);

    // f_x·a + f·a_x = D_x(f·a) → 0
    const DiffPoly div = var(FieldId::F, 1, 0) * a + f * var(FieldId::A, 1, 0);
    CHECK(ibp_normal_form(div).is_zero());

    // f·f_x = D_x(f²/2) → 0
    CHECK(ibp_normal_form(f * var(FieldId::F, 1, 0)).is_zero());

    // f·a_xx and f_xx·a agree modulo divergences.
    const DiffPoly lhs = f * var(FieldId::A, 2, 0);
    const DiffPoly rhs = var(FieldId::F, 2, 0) * a;
    CHECK(ibp_normal_form(lhs) == ibp_normal_form(rhs));
    CHECK_FALSE(ibp_normal_form(lhs).is_zero());

    // Nonlocal input is unsupported.
    CHECK_THROWS_AS((void)ibp_normal_form(var(FieldId::F, -1, 0)), UnsupportedInputError);
}

TEST_CASE("serialization grammar round-trips exactly") {
    const DiffPoly p = Rational(-3, 2) * (var(FieldId::F, 1, 0) * var(FieldId::F, 1, 0)) +
                       Rational(2) * var(FieldId::A, 0, -1) + DiffPoly::constant(Rational(1, 3));
    const std::string text = to_string(p);
    CHECK(parse(text) == p);
    CHECK(to_string(parse(text)) == text);

    CHECK(to_string(DiffPoly{}) == "0");
    CHECK(parse("0").is_zero());
    CHECK(parse("-3/2 * F[1,0] * F[1,0]") == Rational(-3, 2) * (var(FieldId::F, 1, 0) * var(FieldId::F, 1, 0)));
}

TEST_CASE("evaluation against closed forms") {
    const int n = 32;
    const SpectralField fx = SpectralField::from_function(
        n, n, [](double x, double) { return std::sin(x); });
    const SpectralField ax(n, n);
    const Assignment at{&fx, &ax};

    // p = f
    CHECK(l2_norm(evaluate(DiffPoly::field(FieldId::F), at) - fx) < 1e-14);

    // p = f·f_x → sin x cos x
    const DiffPoly p = DiffPoly::field(FieldId::F) * var(FieldId::F, 1, 0);
    const SpectralField expected = SpectralField::from_function(
        n, n, [](double x, double) { return std::sin(x) * std::cos(x); });
    CHECK(l2_norm(evaluate(p, at) - expected) < 1e-13);

    // p = ∂x⁻¹(f_y) with f = sin x sin y, paper rule → (1 − cos x) cos y.
    const SpectralField sxsy = SpectralField::from_function(
        n, n, [](double x, double y) { return std::sin(x) * std::sin(y); });
    const Assignment at2{&sxsy, &ax};
    EvalOptions paper;
    paper.convention.zero_mode_rule = ZeroModeRule::PaperConstant;
    const SpectralField nonlocal = evaluate(var(FieldId::F, -1, 1), at2, paper);
    const SpectralField oracle = SpectralField::from_function(
        n, n, [](double x, double y) { return (1.0 - std::cos(x)) * std::cos(y); });
    CHECK(l2_norm(nonlocal - oracle) < 1e-13);
}

TEST_CASE("integrate_functional examples") {
    const int n = 32;
    const double two_pi_sq = 2.0 * std::numbers::pi * std::numbers::pi;

    SpectralField one(n, n);
    one.at(0, 0) = 1.0;
    const Assignment ones{&one, &one};
    const DiffPoly h0 = DiffPoly::field(FieldId::A) - DiffPoly::field(FieldId::F);
    CHECK(integrate_functional(h0, ones) == doctest::Approx(0.0));

    const SpectralField sinx = SpectralField::from_function(
        n, n, [](double x, double) { return std::sin(x); });
    const SpectralField a(n, n);
    const Assignment at{&sinx, &a};
    const DiffPoly f2 = DiffPoly::field(FieldId::F) * DiffPoly::field(FieldId::F);
    CHECK(integrate_functional(f2, at) == doctest::Approx(two_pi_sq).epsilon(1e-12));
    CHECK(integrate_functional(DiffPoly::field(FieldId::F), at) == doctest::Approx(0.0));
}

TEST_CASE("unassigned field is an error") {
    Assignment none{nullptr, nullptr};
    CHECK_THROWS_AS((void)evaluate(DiffPoly::field(FieldId::F), none), Error);
}

TEST_CASE("monomial ordering is deterministic and graded") {
    const Monomial a = Monomial{}.times(F0, 2);
    const Monomial b = Monomial{}.times(F0).times(A0);
    const Monomial c = Monomial{}.times(F0);
    CHECK(Monomial::degrevlex_less(c, a));
    CHECK(Monomial::degrevlex_less(c, b));
    CHECK(Monomial::degrevlex_less(a, b) != Monomial::degrevlex_less(b, a));
}
