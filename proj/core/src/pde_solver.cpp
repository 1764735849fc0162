#include "lcv/pde_solver.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "lcv/errors.hpp"
#include "lcv/numio.hpp"
#include "lcv/poisson_magri.hpp"
#include "lcv/rng.hpp"

namespace lcv::pde {

const char* equation_name(Equation eq) {
    switch (eq) {
        case Equation::Eq1: return "eq1";
        case Equation::Eq2: return "eq2";
        case Equation::TheoremSystem: return "theorem_system";
        case Equation::Intermediate: return "intermediate";
        case Equation::Family: return "family";
    }
    return "?";
}

Equation equation_from_name(const std::string& name) {
    if (name == "eq1") return Equation::Eq1;
    if (name == "eq2") return Equation::Eq2;
    if (name == "theorem_system") return Equation::TheoremSystem;
    if (name == "intermediate") return Equation::Intermediate;
    if (name == "family") return Equation::Family;
    throw ConfigError("unknown equation '" + name + "'");
}

void SimConfig::validate() const {
    if (nx < 8 || ny < 8 || nx % 2 || ny % 2) throw ConfigError("grid must be even and >= 8");
    if (dt <= 0.0) throw ConfigError("dt must be positive");
    if (t_final < dt) throw ConfigError("t_final must be >= dt");
    if (stride < 1) throw ConfigError("stride must be >= 1");
    if (effective_band() < 1 || 2 * effective_band() >= std::min(nx, ny))
        throw ConfigError("band does not fit the grid");
}

// --- displays ----------------------------------------------------------------

namespace {
SpectralField dx(const SpectralField& u, int n = 1) { return derive(u, Axis::X, n); }
SpectralField dy(const SpectralField& u, int n = 1) { return derive(u, Axis::Y, n); }
}  // namespace

SpectralField eq1_display(const SpectralField& u) {
    return multiply(derive(dx(u), Axis::Y), dy(u)) - multiply(dy(u, 2), dx(u));
}

SpectralField eq2_display(const SpectralField& u, double c) {
    const SpectralField uxy = derive(dx(u), Axis::Y);
    return multiply(dx(u, 2), dy(u)) - multiply(uxy, dx(u)) + c * dy(u, 2);
}

std::pair<SpectralField, SpectralField> theorem_display(const SpectralField& u,
                                                        const SpectralField& v) {
    const SpectralField ux = dx(u), uy = dy(u);
    const SpectralField uxy = derive(ux, Axis::Y), uyy = dy(u, 2);
    SpectralField d1 = multiply(uxy, uy) - multiply(uyy, ux);
    SpectralField d2 = 2.0 * (multiply(uyy, dx(v)) - multiply(uxy, dy(v))) +
                       multiply(uy, derive(dx(v), Axis::Y)) - multiply(ux, dy(v, 2)) -
                       2.0 * (multiply(uyy, ux) + 2.0 * multiply(uxy, uy));
    return {std::move(d1), std::move(d2)};
}

std::pair<SpectralField, SpectralField> theorem_display_exchanged(const SpectralField& u,
                                                                  const SpectralField& v) {
    const SpectralField ux = dx(u), uy = dy(u);
    const SpectralField uxy = derive(ux, Axis::Y), uxx = dx(u, 2);
    SpectralField d1 = multiply(uxy, ux) - multiply(uxx, uy);
    SpectralField d2 = 2.0 * (multiply(uxx, dy(v)) - multiply(uxy, dx(v))) +
                       multiply(ux, derive(dx(v), Axis::Y)) - multiply(uy, dx(v, 2)) -
                       2.0 * (multiply(uxx, uy) + 2.0 * multiply(uxy, ux));
    return {std::move(d1), std::move(d2)};
}

std::pair<SpectralField, SpectralField> intermediate_display(const SpectralField& u,
                                                             const SpectralField& v, double c,
                                                             double c1, double c2,
                                                             const NonlocalConvention& conv) {
    const SpectralField ux = dx(u), uy = dy(u);
    const SpectralField uxx = dx(u, 2), uxy = derive(ux, Axis::Y);
    const SpectralField vx = dx(v), vy = dy(v);

    SpectralField d1 = c * (multiply(uxy, ux) - multiply(uxx, uy));
    if (c2 != 0.0) d1 += c2 * uxy;

    const SpectralField lam_uxxx = lambda_invert(dx(u, 3), c, conv);
    const SpectralField lam_uxx = lambda_invert(uxx, c, conv);

    SpectralField d2 = c * (2.0 * multiply(uxx, vy) - 2.0 * multiply(uxy, vx) +
                            multiply(ux, derive(vx, Axis::Y)) - multiply(uy, dx(v, 2)));
    d2 += 2.0 * multiply(uxx - lam_uxxx, ux - c * uy);
    d2 += 4.0 * multiply(ux - lam_uxx, uxx - c * uxy);
    if (c1 != 0.0) d2 += c1 * dx(u, 4);
    if (c2 != 0.0) {
        const SpectralField lam_uxxy = lambda_invert(derive(uxx, Axis::Y), c, conv);
        d2 += c2 * (derive(vx, Axis::Y) + 2.0 * uxy - 2.0 * lam_uxxy);
    }
    return {std::move(d1), std::move(d2)};
}

SpectralField family_display(const SpectralField& u, double c) {
    const SpectralField ux = dx(u), uy = dy(u);
    const SpectralField uxy = derive(ux, Axis::Y);
    return c * (multiply(uxy, uy) - multiply(dy(u, 2), ux)) + multiply(dx(u, 2), uy) -
           multiply(uxy, ux);
}

// --- inversion ---------------------------------------------------------------

SpectralField invert_dx(const SpectralField& display, XMeanPolicy policy, double* defect) {
    const double d = display.zero_row_norm(Axis::X);
    if (defect) *defect = d;
    if (policy == XMeanPolicy::Error && d > 1e-8)
        throw SolvabilityError("rhs: x-mean defect " + format_double(d) +
                                   " exceeds the strict-policy threshold",
                               d);
    SpectralField projected = display;
    projected.project_zero_row(Axis::X);
    NonlocalConvention conv;  // k_x = 0 modes of the tendency are set to zero
    conv.zero_mode_rule = ZeroModeRule::MeanFree;
    return antiderive(projected, Axis::X, conv);
}

SpectralField invert_lambda_tendency(const SpectralField& display, double c,
                                     const NonlocalConvention& conv, XMeanPolicy policy,
                                     double* defect) {
    const double d = 2.0 * std::numbers::pi * std::abs(display.at(0, 0));
    if (defect) *defect = d;
    if (policy == XMeanPolicy::Error && d > 1e-8)
        throw SolvabilityError("rhs: constant-mode defect " + format_double(d) +
                                   " exceeds the strict-policy threshold",
                               d);
    SpectralField projected = display;
    projected.at(0, 0) = 0.0;
    return lambda_invert(projected, c, conv);
}

SpectralField rhs_eq1(const SpectralField& u, XMeanPolicy policy, double* defect) {
    return invert_dx(eq1_display(u), policy, defect);
}

SpectralField rhs_eq2(const SpectralField& u, double c, XMeanPolicy policy, double* defect) {
    return invert_dx(eq2_display(u, c), policy, defect);
}

std::pair<SpectralField, SpectralField> rhs_theorem_system(const SpectralField& u,
                                                           const SpectralField& v,
                                                           XMeanPolicy policy, double* defect) {
    auto [d1, d2] = theorem_display(u, v);
    double def1 = 0.0, def2 = 0.0;
    SpectralField ut = invert_dx(d1, policy, &def1);
    SpectralField vt = invert_dx(d2, policy, &def2);
    if (defect) *defect = std::hypot(def1, def2);
    return {std::move(ut), std::move(vt)};
}

std::pair<SpectralField, SpectralField> rhs_intermediate(const SpectralField& u,
                                                         const SpectralField& v, double c,
                                                         double c1, double c2,
                                                         const NonlocalConvention& conv,
                                                         XMeanPolicy policy, double* defect) {
    auto [d1, d2] = intermediate_display(u, v, c, c1, c2, conv);
    double def1 = 0.0, def2 = 0.0;
    SpectralField ut = invert_lambda_tendency(d1, c, conv, policy, &def1);
    SpectralField vt = invert_lambda_tendency(d2, c, conv, policy, &def2);
    if (defect) *defect = std::hypot(def1, def2);
    return {std::move(ut), std::move(vt)};
}

SpectralField rhs_family(const SpectralField& u, double c, XMeanPolicy policy, double* defect) {
    return invert_dx(family_display(u, c), policy, defect);
}

// --- time integration ----------------------------------------------------------

namespace {

struct StateVec {
    SpectralField u;
    std::optional<SpectralField> v;

    StateVec axpy(double s, const StateVec& d) const {
        StateVec out{u + s * d.u, std::nullopt};
        if (v) out.v = *v + s * *d.v;
        return out;
    }
};

StateVec eval_rhs(const SimConfig& config, const StateVec& y, double* defect) {
    switch (config.equation) {
        case Equation::Eq1:
            return {rhs_eq1(y.u, config.xmean_policy, defect), std::nullopt};
        case Equation::Eq2:
            return {rhs_eq2(y.u, config.c, config.xmean_policy, defect), std::nullopt};
        case Equation::Family:
            return {rhs_family(y.u, config.c, config.xmean_policy, defect), std::nullopt};
        case Equation::TheoremSystem: {
            auto [ut, vt] = rhs_theorem_system(y.u, *y.v, config.xmean_policy, defect);
            return {std::move(ut), std::move(vt)};
        }
        case Equation::Intermediate: {
            auto [ut, vt] = rhs_intermediate(y.u, *y.v, config.c, config.c1, config.c2,
                                             config.convention, config.xmean_policy, defect);
            return {std::move(ut), std::move(vt)};
        }
    }
    throw ConfigError("eval_rhs: bad equation");
}

bool finite(const SpectralField& f) {
    double sum = 0.0;
    for (const auto& c : f.coefficients()) sum += std::norm(c);
    return std::isfinite(sum);
}

}  // namespace

SimState initial_state(const SimConfig& config) {
    config.validate();
    SimState state;
    state.t = 0.0;
    state.u = random_field(config.seed, config.effective_band(), config.amplitude, config.nx,
                           config.ny);
    if (config.coupled())
        state.v = random_field(Rng::mix(config.seed ^ 0x9e3779b97f4a7c15ull),
                               config.effective_band(), config.amplitude, config.nx, config.ny);
    if (config.equation != Equation::Intermediate) {
        // The ∂x-inversion zeroes the k_x = 0 modes of every tendency, so the
        // x-independent sector never evolves; start it empty. This is also
        // exactly the sector on which the theorem's first integral is
        // conserved by the projected flow.
        state.u.project_zero_row(Axis::X);
        if (state.v) state.v->project_zero_row(Axis::X);
        const double norm = l2_norm(state.u);
        if (norm > 0.0) state.u *= config.amplitude / norm;
        if (state.v) {
            const double vnorm = l2_norm(*state.v);
            if (vnorm > 0.0) *state.v *= config.amplitude / vnorm;
        }
    }
    return state;
}

void rk4_step(SimState& state, const SimConfig& config) {
    StateVec y{state.u, state.v};
    const double dt = config.dt;
    StateVec k1 = eval_rhs(config, y, nullptr);
    StateVec k2 = eval_rhs(config, y.axpy(0.5 * dt, k1), nullptr);
    StateVec k3 = eval_rhs(config, y.axpy(0.5 * dt, k2), nullptr);
    StateVec k4 = eval_rhs(config, y.axpy(dt, k3), nullptr);

    SpectralField du = k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u;
    state.u += (dt / 6.0) * du;
    if (state.v) {
        SpectralField dv = *k1.v + 2.0 * *k2.v + 2.0 * *k3.v + *k4.v;
        *state.v += (dt / 6.0) * dv;
    }
    if (!finite(state.u) || (state.v && !finite(*state.v)))
        throw BlowUpError("rk4_step: non-finite field, last good t = " + format_double(state.t),
                          state.t);
    state.t += dt;
}

ConservationSample sample_conservation(const SimState& state, const SimConfig& config) {
    ConservationSample sample;
    sample.t = state.t;

    const SpectralField f = derive(state.u, Axis::Y);
    const SpectralField a =
        state.v ? derive(*state.v, Axis::Y) : SpectralField(state.u.nx(), state.u.ny());

    // H0 = ∫(a − f): identically zero for y-derivative data, logged as the
    // roundoff-level sanity row.
    const double two_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
    sample.h0 = two_pi_sq * (a.at(0, 0).real() - f.at(0, 0).real());

    if (config.equation == Equation::Intermediate) {
        // Dual coordinates f = Λu, a = Λv; Eq-(16) H₁ is the flow's own
        // Hamiltonian and is conserved.
        static thread_local std::optional<std::pair<double, Functional>> cached;
        if (!cached || cached->first != config.c)
            cached.emplace(config.c, h1_closed_form(config.c, config.convention));
        const SpectralField lf = lambda_apply(state.u, config.c);
        const SpectralField la = lambda_apply(*state.v, config.c);
        sample.h1 = cached->second.value(lf, la);
        sample.h0 = two_pi_sq * (la.at(0, 0).real() - lf.at(0, 0).real());
        if (config.monitor_h2) {
            Hierarchy::Options options;
            options.fp = FrozenPoint{config.c, config.c1};
            options.convention = config.convention;
            sample.h2 = Hierarchy(options).h(2).value(lf, la);
        } else {
            sample.h2 = std::nan("");
        }
    } else {
        // The theorem's own first integral ∫ ∂y⁻¹(f_x)(f + a) = ∫ u_x(u_y + v_y);
        // for the scalar equations v ≡ 0.
        const SpectralField ux = derive(state.u, Axis::X);
        sample.h1 = inner(ux, f + a);
        sample.h2 = std::nan("");
    }

    double defect = 0.0;
    StateVec y{state.u, state.v};
    (void)eval_rhs(config, y, &defect);
    sample.xmean_defect = defect;
    return sample;
}

void write_conservation_csv(std::ostream& os, const ConservationLog& log) {
    os << "t,H0,H1,H2,xmean_defect\n";
    for (const auto& s : log.samples) {
        os << format_double(s.t) << ',' << format_double(s.h0) << ',' << format_double(s.h1)
           << ',' << format_double(s.h2) << ',' << format_double(s.xmean_defect) << '\n';
    }
}

RunResult run(const SimConfig& config) {
    RunResult result;
    result.state = initial_state(config);

    const auto snapshot = [&result](const SimState& state) {
        result.snapshots_u.emplace_back(state.t, state.u);
        if (state.v) result.snapshots_v.emplace_back(state.t, *state.v);
    };

    result.log.samples.push_back(sample_conservation(result.state, config));
    snapshot(result.state);

    const long steps = std::lround(config.t_final / config.dt);
    for (long i = 1; i <= steps; ++i) {
        rk4_step(result.state, config);
        if (i % config.stride == 0 || i == steps) {
            result.log.samples.push_back(sample_conservation(result.state, config));
            snapshot(result.state);
        }
    }
    result.state.log = result.log;
    return result;
}

SpectralField rk4_step_field(const std::function<SpectralField(double, const SpectralField&)>& rhs,
                             double t, const SpectralField& u, double dt) {
    const SpectralField k1 = rhs(t, u);
    const SpectralField k2 = rhs(t + 0.5 * dt, u + (0.5 * dt) * k1);
    const SpectralField k3 = rhs(t + 0.5 * dt, u + (0.5 * dt) * k2);
    const SpectralField k4 = rhs(t + dt, u + dt * k3);
    return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double manufactured_error(const SimConfig& config, const Manufactured& manufactured, int n,
                          double dt) {
    if (config.coupled())
        throw ConfigError("manufactured_error: scalar equations only");
    auto bare_rhs = [&config](const SpectralField& u) {
        switch (config.equation) {
            case Equation::Eq1: return rhs_eq1(u, XMeanPolicy::ProjectAndLog);
            case Equation::Eq2: return rhs_eq2(u, config.c, XMeanPolicy::ProjectAndLog);
            default: return rhs_family(u, config.c, XMeanPolicy::ProjectAndLog);
        }
    };
    auto forced = [&](double t, const SpectralField& u) {
        const SpectralField star = resample(manufactured.u_star(t), n, n);
        return bare_rhs(u) + resample(manufactured.dudt_star(t), n, n) - bare_rhs(star);
    };

    SpectralField u = resample(manufactured.u_star(0.0), n, n);
    const long steps = std::lround(config.t_final / dt);
    double t = 0.0;
    for (long i = 0; i < steps; ++i) {
        u = rk4_step_field(forced, t, u, dt);
        t = (i + 1) * dt;
        if (!finite(u)) throw BlowUpError("manufactured_error: blow-up", t);
    }
    const SpectralField target = resample(manufactured.u_star(t), n, n);
    return max_abs(u - target);
}

ConvergenceStudy manufactured_study(const SimConfig& config, const Manufactured& manufactured,
                                    const std::vector<double>& dts, int n_for_dts,
                                    const std::vector<int>& grids, double dt_for_grids) {
    ConvergenceStudy study;
    for (std::size_t i = 0; i < dts.size(); ++i) {
        ConvergenceRow row;
        row.parameter = dts[i];
        row.error = manufactured_error(config, manufactured, n_for_dts, dts[i]);
        if (i > 0) {
            const auto& prev = study.temporal[i - 1];
            row.observed_order = std::log(prev.error / row.error) / std::log(prev.parameter / row.parameter);
        }
        study.temporal.push_back(row);
    }
    for (std::size_t i = 0; i < grids.size(); ++i) {
        ConvergenceRow row;
        row.parameter = grids[i];
        row.error = manufactured_error(config, manufactured, grids[i], dt_for_grids);
        if (i > 0) {
            const auto& prev = study.spatial[i - 1];
            row.observed_order = std::log(prev.error / row.error) / std::log(row.parameter / prev.parameter);
        }
        study.spatial.push_back(row);
    }
    return study;
}

}  // namespace lcv::pde
