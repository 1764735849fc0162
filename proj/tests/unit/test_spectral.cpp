#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "lcv/errors.hpp"
#include "lcv/spectral_field.hpp"

using namespace lcv;

namespace {
constexpr double pi = std::numbers::pi;

SpectralField sample(int n, double (*f)(double, double)) {
    return SpectralField::from_function(n, n, f);
}

double field_dist(const SpectralField& a, const SpectralField& b) { return l2_norm(a - b); }
}  // namespace

TEST_CASE("derive matches closed forms") {
    const int n = 32;
    auto sinx = sample(n, [](double x, double) { return std::sin(x); });
    auto cosx = sample(n, [](double x, double) { return std::cos(x); });
    CHECK(field_dist(derive(sinx, Axis::X), cosx) < 1e-13);

    auto cosy = sample(n, [](double, double y) { return std::cos(y); });
    auto siny = sample(n, [](double, double y) { return std::sin(y); });
    CHECK(field_dist(derive(cosy, Axis::Y, 3), siny) < 1e-11);

    auto sxsy = sample(n, [](double x, double y) { return std::sin(x) * std::sin(y); });
    auto cxcy = sample(n, [](double x, double y) { return std::cos(x) * std::cos(y); });
    CHECK(field_dist(derive(derive(sxsy, Axis::X), Axis::Y), cxcy) < 1e-13);
}

TEST_CASE("antiderive closed forms and conventions") {
    const int n = 32;
    auto cosx = sample(n, [](double x, double) { return std::cos(x); });
    auto sinx = sample(n, [](double x, double) { return std::sin(x); });

    for (ZeroModeRule rule : {ZeroModeRule::PaperConstant, ZeroModeRule::MeanFree}) {
        NonlocalConvention conv;
        conv.zero_mode_rule = rule;
        CHECK(field_dist(antiderive(cosx, Axis::X, conv), sinx) < 1e-13);
    }

    SpectralField zero(n, n);
    CHECK(l2_norm(antiderive(zero, Axis::X)) == 0.0);

    // Paper display for sin x · cos y: ∫₀ˣ = (1 − cos x)cos y, subtracted term 0.
    auto sxcy = sample(n, [](double x, double y) { return std::sin(x) * std::cos(y); });
    NonlocalConvention paper;
    paper.zero_mode_rule = ZeroModeRule::PaperConstant;
    auto expected = sample(n, [](double x, double y) { return (1.0 - std::cos(x)) * std::cos(y); });
    CHECK(field_dist(antiderive(sxcy, Axis::X, paper), expected) < 1e-13);

    // Mean-free rule drops the k_x = 0 row instead.
    NonlocalConvention mean_free;
    mean_free.zero_mode_rule = ZeroModeRule::MeanFree;
    auto expected_free = sample(n, [](double x, double y) { return -std::cos(x) * std::cos(y); });
    CHECK(field_dist(antiderive(sxcy, Axis::X, mean_free), expected_free) < 1e-13);

    // Energy on the k_x = 0 modes is a solvability violation.
    auto siny = sample(n, [](double, double y) { return std::sin(y); });
    CHECK_THROWS_AS((void)antiderive(siny, Axis::X), SolvabilityError);
}

TEST_CASE("lambda operator and inverse") {
    const int n = 32;
    const double c = std::numbers::sqrt2;
    auto sinx = sample(n, [](double x, double) { return std::sin(x); });
    auto neg_cosx = sample(n, [](double x, double) { return -std::cos(x); });
    CHECK(field_dist(lambda_apply(sinx, c), neg_cosx) < 1e-13);
    CHECK(field_dist(lambda_apply(sinx, 17.5), neg_cosx) < 1e-13);

    SpectralField f = random_field(42, 5, 1.0, n, n);
    CHECK(field_dist(lambda_invert(lambda_apply(f, c), c), f) < 1e-12);

    // c = 1 puts e^{i(x+y)} on the kernel.
    auto diag = sample(n, [](double x, double y) { return std::cos(x + y); });
    CHECK(l2_norm(lambda_apply(diag, 1.0)) < 1e-13);
    CHECK_THROWS_AS((void)lambda_invert(diag, 1.0), ResonanceError);
}

TEST_CASE("dealiased products") {
    const int n = 32;
    auto sinx = sample(n, [](double x, double) { return std::sin(x); });
    auto expected = sample(n, [](double x, double) { return 0.5 * (1.0 - std::cos(2 * x)); });
    CHECK(field_dist(multiply(sinx, sinx), expected) < 1e-13);

    SpectralField zero(n, n);
    CHECK(l2_norm(multiply(sinx, zero)) == 0.0);

    // (sin x)(cos y): four modes at (±1, 0) ⊗ (0, ±1); compare against the
    // direct convolution on a small grid.
    auto cosy = sample(n, [](double, double y) { return std::cos(y); });
    SpectralField prod = multiply(sinx, cosy);
    SpectralField conv(n, n);
    for (int kx : {-1, 1}) {
        for (int ky : {-1, 1}) {
            // sin x has coefficients ∓i/2 at kx = ±1; cos y has 1/2 at ky = ±1.
            const std::complex<double> cx(0.0, kx > 0 ? -0.5 : 0.5);
            conv.at(kx, ky) = cx * 0.5;
        }
    }
    CHECK(field_dist(prod, conv) < 1e-14);
}

TEST_CASE("inner products") {
    const int n = 32;
    auto sinx = sample(n, [](double x, double) { return std::sin(x); });
    auto cosx = sample(n, [](double x, double) { return std::cos(x); });
    CHECK(inner(sinx, sinx) == doctest::Approx(2.0 * pi * pi).epsilon(1e-12));
    CHECK(std::abs(inner(sinx, cosx)) < 1e-13);
}

TEST_CASE("random fields deterministic, zero-mean, band-limited") {
    SpectralField a = random_field(7, 4, 1.0, 32, 32);
    SpectralField b = random_field(7, 4, 1.0, 32, 32);
    REQUIRE(a.coefficients().size() == b.coefficients().size());
    for (std::size_t i = 0; i < a.coefficients().size(); ++i)
        CHECK(a.coefficients()[i] == b.coefficients()[i]);

    CHECK(std::abs(mean_value(a)) == 0.0);
    CHECK(l2_norm(a) == doctest::Approx(1.0).epsilon(1e-12));
    for (int kx = -16; kx < 16; ++kx)
        for (int ky = -16; ky < 16; ++ky)
            if (std::abs(kx) > 4 || std::abs(ky) > 4) CHECK(std::abs(a.at(kx, ky)) == 0.0);

    // Same modes regardless of grid.
    SpectralField big = random_field(7, 4, 1.0, 64, 64);
    CHECK(l2_norm(resample(a, 64, 64) - big) < 1e-14);
}

TEST_CASE("reality is preserved by operation chains") {
    SpectralField f = random_field(3, 5, 1.2, 32, 32);
    SpectralField g = random_field(4, 5, 0.8, 32, 32);
    SpectralField chain = multiply(derive(f, Axis::X, 2), g) - lambda_apply(f, 0.77);
    CHECK(chain.max_imag() < 1e-12);
}

TEST_CASE("csv snapshot round-trip is bit-exact on values") {
    SpectralField f = random_field(11, 5, 1.0, 16, 16);
    std::ostringstream os;
    write_field_csv(os, f, 0.125);

    // The text encodes the grid values exactly.
    std::istringstream is(os.str());
    const FieldCsv raw = read_field_csv_raw(is);
    CHECK(raw.t == 0.125);
    const auto va = f.values();
    REQUIRE(raw.values.size() == va.size());
    for (std::size_t i = 0; i < va.size(); ++i) CHECK(va[i] == raw.values[i]);

    // Field reconstruction is transform-accurate.
    std::istringstream is2(os.str());
    SpectralField back = read_field_csv(is2);
    CHECK(field_dist(back, f) < 1e-13);
}

TEST_CASE("transpose exchanges the axes") {
    auto f = sample(32, [](double x, double y) { return std::sin(x) * std::cos(2 * y); });
    auto ft = sample(32, [](double x, double y) { return std::sin(y) * std::cos(2 * x); });
    CHECK(field_dist(transpose_xy(f), ft) < 1e-13);
}
