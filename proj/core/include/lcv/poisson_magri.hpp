#pragma once

#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>

#include "lcv/jet.hpp"
#include "lcv/loop_algebra.hpp"
#include "lcv/spectral_field.hpp"

namespace lcv {

/// Variational gradient d_{(f,a)}H = (δ_aH, δ_fH), stored with the standard
/// calculus signs (δ_a(a−f) = +1). As an algebra element the δa component
/// occupies the vector-field slot.
struct GradientPair {
    SpectralField da;
    SpectralField df;
};

struct TangentField {
    SpectralField ft;
    SpectralField at;
};

/// Frozen dual point m₀ = (1, 1, c₁, c) defining the constant Poisson
/// structure; c is arbitrary, default irrational so Λ = −∂x + c∂y has only
/// the constant mode in its kernel.
struct FrozenPoint {
    double c = std::numbers::sqrt2;
    double c1 = 0.0;

    DualPoint as_dual(int nx, int ny) const;
};

/// A Hamiltonian: evaluation plus gradient programs, optionally backed by a
/// jet-polynomial integrand (in which case the programs are derived from it
/// and finite-difference-checked at construction).
class Functional {
  public:
    using GradientFn =
        std::function<GradientPair(const SpectralField& f, const SpectralField& a)>;
    using ValueFn = std::function<double(const SpectralField& f, const SpectralField& a)>;

    Functional(std::string name, GradientFn gradient, ValueFn value,
               std::optional<jet::DiffPoly> integrand = std::nullopt);

    static Functional from_integrand(std::string name, jet::DiffPoly h,
                                     const jet::EvalOptions& options = {});

    double value(const SpectralField& f, const SpectralField& a) const { return value_(f, a); }
    GradientPair gradient(const SpectralField& f, const SpectralField& a) const {
        return gradient_(f, a);
    }
    const std::string& name() const { return name_; }
    const std::optional<jet::DiffPoly>& integrand() const { return integrand_; }

  private:
    std::string name_;
    GradientFn gradient_;
    ValueFn value_;
    std::optional<jet::DiffPoly> integrand_;
};

/// Check d/dε H(f+εφ, a+εψ) against ⟨gradient, (φ,ψ)⟩ on deterministic random
/// directions; throws StructuralBugError beyond `tol` relative.
void validate_gradient(const Functional& H, int nx, int ny, int band, double tol = 1e-5,
                       bool mean_free_directions = false);

AlgebraElement gradient_as_element(const GradientPair& d);

/// X_H(m) = ad*_{d_mH} m, the Hamiltonian field of the Lie-Poisson structure.
TangentField ham_lie(const Functional& H, const DualPoint& m);

/// Hamiltonian field of the frozen constant structure at (f, a):
/// f_t = Λ(δ_aH), a_t = 2(δ_aH)_x + Λ(δ_fH) (+ c₁(δ_aH)_xxx when c₁ ≠ 0).
TangentField ham_const(const Functional& H, const FrozenPoint& fp, const SpectralField& f,
                       const SpectralField& a);

/// The c→∞ limit structure: f_t = (δ_aH)_y, a_t = (δ_fH)_y.
TangentField ham_limit(const Functional& H, const SpectralField& f, const SpectralField& a);

/// {H, G}(m) = ⟨[d_mH, d_mG], m⟩.
double bracket_lie(const Functional& H, const Functional& G, const DualPoint& m);

/// {H, G}_ω = ⟨m₀, [dH, dG]⟩ at the point (f, a).
double bracket_const(const Functional& H, const Functional& G, const FrozenPoint& fp,
                     const SpectralField& f, const SpectralField& a);

/// Cyclic Jacobi sum of the pencil {,}_λ = {,}_ω − λ{,} at m, with the outer
/// functional gradients computed by central finite differences on grid-value
/// perturbations (step `fd_step`). Relative defect.
double pencil_jacobi_defect(double lambda, const Functional& F, const Functional& G,
                            const Functional& H, const DualPoint& m, const FrozenPoint& fp,
                            double fd_step = 1e-5);

/// H₀ = ∫(a − f) dxdy, the Casimir seeding the recursion.
Functional casimir_h0();

/// Eq-(16) closed form H₁ = ∫(Λ⁻¹(f_x)(a+f) − Λ⁻²(f_xx)f) dxdy with its
/// analytically derived gradient (δ_a, δ_f) = (Λ⁻¹f_x, Λ⁻¹a_x + 2Λ⁻¹f_x − 2Λ⁻²f_xx).
Functional h1_closed_form(double c, const NonlocalConvention& convention = {});

/// First integral of the theorem system (the c→∞ ladder analog of H₁):
/// ∫ ∂y⁻¹(f_x)·(a + f) dxdy.
Functional h1_limit_form(const NonlocalConvention& convention = {});

/// Invert the ham_const display: given X_k = X^ω_{H_{k+1}}, recover the
/// gradient of H_{k+1}: δa = Λ⁻¹(ft), δf = Λ⁻¹(at − 2(δa)_x − c₁(δa)_xxx).
GradientPair magri_step(const TangentField& xk, const FrozenPoint& fp,
                        const NonlocalConvention& convention = {});

inline constexpr int kMaxHierarchyDepth = 3;

/// Lenard-Magri hierarchy H₀, H₁, H₂, H₃ built by iterating
/// X_{H_k} = X^ω_{H_{k+1}}; values of recursion-generated members come from
/// the homotopy integral H(f,a) = ∫₀¹ ⟨grad H(tf,ta), (f,a)⟩ dt
/// (Gauss-Legendre, node-doubling accuracy check).
class Hierarchy {
  public:
    struct Options {
        FrozenPoint fp;
        /// Charges carried by the dual points the Lie-Poisson fields are
        /// evaluated at; default matches the frozen point's (c₁, c).
        std::optional<double> point_c1;
        std::optional<double> point_c2;
        NonlocalConvention convention;
        int gauss_nodes = 32;
        double quadrature_tol = 1e-6;
    };

    explicit Hierarchy(Options options);

    /// k ≤ 3; functionals remain valid after the Hierarchy goes away.
    Functional h(int k) const;
    double point_c1() const;
    double point_c2() const;

  private:
    struct State;
    std::shared_ptr<State> state_;
};

/// Homotopy value of the recursion-generated H_k at (f, a).
double magri_reconstruct(int k, const SpectralField& f, const SpectralField& a,
                         const Hierarchy::Options& options);

double tangent_norm(const TangentField& t);
double tangent_rel_defect(const TangentField& x, const TangentField& y);

/// Gauss-Legendre nodes/weights on [0, 1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace lcv
