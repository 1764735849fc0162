#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "lcv/errors.hpp"
#include "lcv/pde_solver.hpp"
#include "lcv/poisson_magri.hpp"

using namespace lcv;
using namespace lcv::pde;

namespace {
const int N = 32;
const double kC = std::numbers::sqrt2;

SpectralField fn(double (*f)(double, double)) { return SpectralField::from_function(N, N, f); }
}  // namespace

TEST_CASE("eq1: x-independent and constant data are stationary") {
    CHECK(l2_norm(rhs_eq1(fn([](double, double y) { return std::sin(y) + 0.5 * std::cos(3 * y); }))) <
          1e-13);
    SpectralField constant(N, N);
    constant.at(0, 0) = 2.5;
    CHECK(l2_norm(rhs_eq1(constant)) == 0.0);
}

TEST_CASE("eq2: the c-term solvability defect is surfaced") {
    // u = cos y, c = 1: the display is −cos y, entirely x-independent.
    const SpectralField u = fn([](double, double y) { return std::cos(y); });
    double defect = 0.0;
    const SpectralField ut = rhs_eq2(u, 1.0, XMeanPolicy::ProjectAndLog, &defect);
    CHECK(l2_norm(ut) == 0.0);
    CHECK(defect == doctest::Approx(l2_norm(fn([](double, double y) { return std::cos(y); })))
                        .epsilon(1e-12));
    CHECK_THROWS_AS((void)rhs_eq2(u, 1.0, XMeanPolicy::Error), SolvabilityError);

    // x-independent data with c = 0 is stationary.
    CHECK(l2_norm(rhs_eq2(u, 0.0)) < 1e-14);
}

TEST_CASE("theorem system: zero data and v = 0 specialization") {
    const SpectralField zero(N, N);
    auto [ut0, vt0] = rhs_theorem_system(zero, zero);
    CHECK(l2_norm(ut0) == 0.0);
    CHECK(l2_norm(vt0) == 0.0);

    const SpectralField u = random_field(51, 4, 1.0, N, N);
    auto [ut, vt] = rhs_theorem_system(u, zero);
    CHECK(l2_norm(ut - rhs_eq1(u)) < 1e-14);
}

TEST_CASE("family: c = 0 is eq2 at zero charge; x-independent stationary") {
    const SpectralField u = random_field(52, 4, 1.0, N, N);
    CHECK(l2_norm(rhs_family(u, 0.0) - rhs_eq2(u, 0.0)) < 1e-14);
    CHECK(l2_norm(rhs_family(fn([](double, double y) { return std::sin(2 * y); }), 3.3)) < 1e-13);
}

TEST_CASE("intermediate: single-mode hand oracle") {
    // u = sin(x + 2y), v = 0, c1 = c2 = 0. With s = 2c − 1:
    //   d1 = 0,  d2 = 3(s − 1)sin(2x + 4y),  v_t = −3(s − 1)cos(2x + 4y)/(2s).
    const double c = kC;
    const double s = 2.0 * c - 1.0;
    const SpectralField u = fn([](double x, double y) { return std::sin(x + 2 * y); });
    const SpectralField v(N, N);

    auto [d1, d2] = intermediate_display(u, v, c, 0.0, 0.0);
    CHECK(l2_norm(d1) < 1e-11);
    const SpectralField d2_oracle = 3.0 * (s - 1.0) *
                                    fn([](double x, double y) { return std::sin(2 * x + 4 * y); });
    CHECK(l2_norm(d2 - d2_oracle) < 1e-11);

    auto [ut, vt] = rhs_intermediate(u, v, c, 0.0, 0.0);
    CHECK(l2_norm(ut) < 1e-11);
    const SpectralField vt_oracle =
        (-3.0 * (s - 1.0) / (2.0 * s)) *
        fn([](double x, double y) { return std::cos(2 * x + 4 * y); });
    CHECK(l2_norm(vt - vt_oracle) < 1e-11);

    // u = 0 → 0.
    auto [zu, zv] = rhs_intermediate(SpectralField(N, N), v, c, 0.0, 0.0);
    CHECK(l2_norm(zu) == 0.0);
    CHECK(l2_norm(zv) == 0.0);
}

TEST_CASE("intermediate tendencies agree with the Lie-Poisson field of H1") {
    // Eq (17) is X_{H1} written in u = Λ⁻¹f, v = Λ⁻¹a variables: the first
    // display equals the f-slot of ham_lie(H1, (Λu, Λv, c1, c2)).
    const double c = kC;
    const double c1 = 0.4, c2 = -0.8;
    SpectralField u = random_field(53, 3, 0.7, N, N);
    SpectralField v = random_field(54, 3, 0.7, N, N);

    auto [d1, d2] = intermediate_display(u, v, c, c1, c2);
    const Functional h1 = h1_closed_form(c);
    const TangentField x1 = ham_lie(h1, DualPoint(lambda_apply(u, c), lambda_apply(v, c), c1, c2));
    CHECK(l2_norm(d1 - x1.ft) / (1.0 + l2_norm(x1.ft)) < 1e-11);
    CHECK(l2_norm(d2 - x1.at) / (1.0 + l2_norm(x1.at)) < 1e-11);
}

TEST_CASE("rk4 on the linear oscillator has order 4") {
    // du/dt = λu on a single mode, exact solution e^{λt}.
    const double lambda = -1.3;
    SpectralField u0(16, 16);
    u0.at(1, 0) = std::complex<double>(0.25, -0.1);
    u0.at(-1, 0) = std::conj(u0.at(1, 0));
    auto rhs = [lambda](double, const SpectralField& u) { return lambda * u; };

    std::vector<double> errors;
    for (double dt : {1e-2, 5e-3, 2.5e-3}) {
        SpectralField u = u0;
        const long steps = std::lround(1.0 / dt);
        for (long i = 0; i < steps; ++i) u = rk4_step_field(rhs, i * dt, u, dt);
        errors.push_back(l2_norm(u - std::exp(lambda) * u0));
    }
    const double order1 = std::log2(errors[0] / errors[1]);
    const double order2 = std::log2(errors[1] / errors[2]);
    CHECK(order1 == doctest::Approx(4.0).epsilon(0.03));
    CHECK(order2 == doctest::Approx(4.0).epsilon(0.03));
}

TEST_CASE("zero initial data stays zero") {
    SimConfig config;
    config.equation = Equation::TheoremSystem;
    config.nx = config.ny = 16;
    config.dt = 1e-2;
    config.t_final = 0.1;
    config.amplitude = 1.0;
    SimState state = initial_state(config);
    state.u = SpectralField(16, 16);
    state.v = SpectralField(16, 16);
    for (int i = 0; i < 10; ++i) rk4_step(state, config);
    CHECK(l2_norm(state.u) == 0.0);
    CHECK(l2_norm(*state.v) == 0.0);
}

TEST_CASE("x-independent initial data is a fixed point of eq1 runs") {
    SimConfig config;
    config.equation = Equation::Eq1;
    config.nx = config.ny = 16;
    config.dt = 1e-2;
    config.t_final = 0.05;
    config.stride = 1;
    SimState state = initial_state(config);
    state.u = SpectralField::from_function(16, 16,
                                           [](double, double y) { return std::sin(y); });
    const SpectralField u0 = state.u;
    for (int i = 0; i < 5; ++i) {
        rk4_step(state, config);
        CHECK(l2_norm(state.u - u0) < 1e-14);
    }
}

TEST_CASE("theorem-system conservation over a short run") {
    SimConfig config;
    config.equation = Equation::TheoremSystem;
    config.nx = config.ny = 32;
    config.band = 3;
    config.dt = 2e-3;
    config.t_final = 0.2;
    config.stride = 10;
    config.seed = 5;
    const RunResult result = run(config);

    REQUIRE(result.log.samples.size() >= 2);
    const auto& first = result.log.samples.front();
    const auto& last = result.log.samples.back();
    CHECK(std::abs(first.h0) < 1e-12);
    CHECK(std::abs(last.h0) < 1e-12);
    // The theorem's first integral ∫u_x(u_y + v_y).
    CHECK(std::abs(last.h1 - first.h1) < 1e-9 * (1.0 + std::abs(first.h1)));
}

TEST_CASE("intermediate conservation of the Eq-(16) Hamiltonian over a short run") {
    SimConfig config;
    config.equation = Equation::Intermediate;
    config.nx = config.ny = 32;
    config.band = 3;
    config.dt = 2e-3;
    config.t_final = 0.1;
    config.stride = 5;
    config.seed = 6;
    config.amplitude = 0.5;
    const RunResult result = run(config);
    const auto& first = result.log.samples.front();
    const auto& last = result.log.samples.back();
    CHECK(std::abs(last.h1 - first.h1) < 1e-8 * (1.0 + std::abs(first.h1)));
}

TEST_CASE("runs are deterministic") {
    SimConfig config;
    config.equation = Equation::TheoremSystem;
    config.nx = config.ny = 16;
    config.band = 2;
    config.dt = 5e-3;
    config.t_final = 0.05;
    config.stride = 2;
    const RunResult r1 = run(config);
    const RunResult r2 = run(config);
    std::ostringstream a, b;
    write_conservation_csv(a, r1.log);
    write_conservation_csv(b, r2.log);
    CHECK(a.str() == b.str());
    CHECK(l2_norm(r1.state.u - r2.state.u) == 0.0);
}

TEST_CASE("manufactured fixed point is held") {
    SimConfig config;
    config.equation = Equation::Eq1;
    config.t_final = 0.1;
    Manufactured m;
    m.u_star = [](double) {
        return SpectralField::from_function(
            32, 32, [](double x, double y) { return std::sin(x) * std::sin(y); });
    };
    m.dudt_star = [](double) { return SpectralField(32, 32); };
    const double err = manufactured_error(config, m, 32, 1e-3);
    CHECK(err < 1e-9);
}

TEST_CASE("manufactured temporal convergence is fourth order (smoke)") {
    SimConfig config;
    config.equation = Equation::Eq1;
    config.t_final = 0.5;
    Manufactured m;
    m.u_star = [](double t) {
        return std::cos(t) * SpectralField::from_function(32, 32, [](double x, double y) {
                   return std::sin(x) * std::sin(y);
               });
    };
    m.dudt_star = [](double t) {
        return -std::sin(t) * SpectralField::from_function(32, 32, [](double x, double y) {
                   return std::sin(x) * std::sin(y);
               });
    };
    const ConvergenceStudy study =
        manufactured_study(config, m, {2e-2, 1e-2}, 32, {}, 1e-3);
    REQUIRE(study.temporal.size() == 2);
    CHECK(study.temporal[1].observed_order == doctest::Approx(4.0).epsilon(0.06));
}

TEST_CASE("blow-up is detected with the last good time") {
    SimConfig config;
    config.equation = Equation::Eq1;
    config.nx = config.ny = 16;
    config.band = 2;
    config.dt = 0.5;  // wildly unstable step
    config.t_final = 50.0;
    config.amplitude = 30.0;
    SimState state = initial_state(config);
    bool blew_up = false;
    try {
        for (int i = 0; i < 100; ++i) rk4_step(state, config);
    } catch (const BlowUpError& err) {
        blew_up = true;
        CHECK(err.last_good_t >= 0.0);
    }
    CHECK(blew_up);
}

TEST_CASE("conservation csv format") {
    ConservationLog log;
    log.samples.push_back({0.0, 1.0, 2.0, std::nan(""), 0.5});
    std::ostringstream os;
    write_conservation_csv(os, log);
    CHECK(os.str() == "t,H0,H1,H2,xmean_defect\n0,1,2,nan,0.5\n");
}
