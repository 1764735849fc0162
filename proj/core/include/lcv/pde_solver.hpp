#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "lcv/spectral_field.hpp"

namespace lcv::pde {

enum class Equation { Eq1, Eq2, TheoremSystem, Intermediate, Family };
enum class XMeanPolicy { ProjectAndLog, Error };

const char* equation_name(Equation eq);
Equation equation_from_name(const std::string& name);

struct SimConfig {
    Equation equation = Equation::TheoremSystem;
    int nx = 64, ny = 64;
    double dt = 1e-3;
    double t_final = 1.0;
    double c = std::numbers::sqrt2;  // charge / interpolation parameter
    double c1 = 0.0;
    double c2 = 0.0;
    NonlocalConvention convention;
    XMeanPolicy xmean_policy = XMeanPolicy::ProjectAndLog;
    std::uint64_t seed = 1;
    int stride = 10;
    int band = 0;  // 0: use nx/6
    double amplitude = 1.0;
    bool monitor_h2 = false;

    bool coupled() const {
        return equation == Equation::TheoremSystem || equation == Equation::Intermediate;
    }
    int effective_band() const { return band > 0 ? band : nx / 6; }
    void validate() const;
};

// --- right-hand sides -------------------------------------------------------
// Each equation is given in u_tx (resp. Λu_t) form; the *_display functions
// return the right-hand side exactly as displayed, and the rhs_* functions
// invert ∂x (resp. Λ), zeroing the kernel modes of u_t per xmean_policy and
// reporting the discarded defect norm.

SpectralField eq1_display(const SpectralField& u);
SpectralField eq2_display(const SpectralField& u, double c);
std::pair<SpectralField, SpectralField> theorem_display(const SpectralField& u,
                                                        const SpectralField& v);
/// The theorem system with the roles of x and y exchanged in every
/// derivative; the large-c limit of (1/c)·intermediate_display.
std::pair<SpectralField, SpectralField> theorem_display_exchanged(const SpectralField& u,
                                                                  const SpectralField& v);
std::pair<SpectralField, SpectralField> intermediate_display(const SpectralField& u,
                                                             const SpectralField& v, double c,
                                                             double c1, double c2,
                                                             const NonlocalConvention& conv = {});
SpectralField family_display(const SpectralField& u, double c);

SpectralField invert_dx(const SpectralField& display, XMeanPolicy policy,
                        double* defect = nullptr);
SpectralField invert_lambda_tendency(const SpectralField& display, double c,
                                     const NonlocalConvention& conv, XMeanPolicy policy,
                                     double* defect = nullptr);

SpectralField rhs_eq1(const SpectralField& u, XMeanPolicy policy = XMeanPolicy::ProjectAndLog,
                      double* defect = nullptr);
SpectralField rhs_eq2(const SpectralField& u, double c,
                      XMeanPolicy policy = XMeanPolicy::ProjectAndLog, double* defect = nullptr);
std::pair<SpectralField, SpectralField> rhs_theorem_system(
    const SpectralField& u, const SpectralField& v,
    XMeanPolicy policy = XMeanPolicy::ProjectAndLog, double* defect = nullptr);
std::pair<SpectralField, SpectralField> rhs_intermediate(
    const SpectralField& u, const SpectralField& v, double c, double c1, double c2,
    const NonlocalConvention& conv = {}, XMeanPolicy policy = XMeanPolicy::ProjectAndLog,
    double* defect = nullptr);
SpectralField rhs_family(const SpectralField& u, double c,
                         XMeanPolicy policy = XMeanPolicy::ProjectAndLog,
                         double* defect = nullptr);

// --- time integration -------------------------------------------------------

struct ConservationSample {
    double t = 0.0;
    double h0 = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;  // NaN when monitoring is off
    double xmean_defect = 0.0;
};

struct ConservationLog {
    std::vector<ConservationSample> samples;
};

void write_conservation_csv(std::ostream& os, const ConservationLog& log);

struct SimState {
    double t = 0.0;
    SpectralField u;
    std::optional<SpectralField> v;
    ConservationLog log;
};

SimState initial_state(const SimConfig& config);

/// One classical RK4 step; throws BlowUpError with the last good time when a
/// non-finite field appears.
void rk4_step(SimState& state, const SimConfig& config);

/// Monitored quantities at the current state (H₀, the equation's first
/// integral as H₁, optionally H₂, and the current x-mean defect).
ConservationSample sample_conservation(const SimState& state, const SimConfig& config);

struct RunResult {
    SimState state;
    ConservationLog log;
    std::vector<std::pair<double, SpectralField>> snapshots_u;
    std::vector<std::pair<double, SpectralField>> snapshots_v;
};

RunResult run(const SimConfig& config);

/// Generic RK4 stage update for a scalar field equation du/dt = rhs(t, u);
/// used by the manufactured-solution harness and embedding tests.
SpectralField rk4_step_field(const std::function<SpectralField(double, const SpectralField&)>& rhs,
                             double t, const SpectralField& u, double dt);

struct Manufactured {
    std::function<SpectralField(double)> u_star;
    std::function<SpectralField(double)> dudt_star;
};

/// Integrate the forced equation du/dt = rhs(u) + [u*'(t) − rhs(u*(t))] to
/// t_final on an nx×nx grid with step dt; returns max-norm error vs u*(T).
double manufactured_error(const SimConfig& config, const Manufactured& manufactured, int n,
                          double dt);

struct ConvergenceRow {
    double parameter = 0.0;  // dt or N
    double error = 0.0;
    double observed_order = 0.0;  // vs previous row; 0 for the first
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> temporal;
    std::vector<ConvergenceRow> spatial;
};

ConvergenceStudy manufactured_study(const SimConfig& config, const Manufactured& manufactured,
                                    const std::vector<double>& dts, int n_for_dts,
                                    const std::vector<int>& grids, double dt_for_grids);

}  // namespace lcv::pde
