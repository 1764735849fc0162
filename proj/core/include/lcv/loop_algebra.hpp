#pragma once

#include "lcv/spectral_field.hpp"

namespace lcv {

/// Element of the looped cotangent Virasoro algebra
/// 𝔤 = C^∞(T²) ⊕ C^∞(T²) ⊕ ℝ²: a vector-field part f, a cotangent part a,
/// and two central components.
struct AlgebraElement {
    SpectralField f;
    SpectralField a;
    double alpha1 = 0.0;
    double alpha2 = 0.0;

    AlgebraElement(SpectralField f, SpectralField a, double alpha1 = 0.0, double alpha2 = 0.0);
    static AlgebraElement zero(int nx, int ny);
};

/// Point of the regular dual 𝔤*_reg: (g, b, c1, c2) with c1 the
/// Gelfand-Fuchs-type charge and c2 the loop (Kac-Moody-type) charge.
struct DualPoint {
    SpectralField g;
    SpectralField b;
    double c1 = 0.0;
    double c2 = 0.0;

    DualPoint(SpectralField g, SpectralField b, double c1 = 0.0, double c2 = 0.0);
    static DualPoint zero(int nx, int ny);
};

/// Commutator of 𝔤. The central components of the inputs do not enter the
/// right-hand side; the output's central components are the two cocycles.
AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y);

/// ⟨X, m⟩ = ∫(f·b + g·a) dxdy + α₁c₁ + α₂c₂.
double pairing(const AlgebraElement& x, const DualPoint& m);

/// Coadjoint action on the regular dual; output charges are (0, 0).
DualPoint coad(const AlgebraElement& x, const DualPoint& m);

/// Sign σ in ⟨Y, coad(X, m)⟩ = σ·⟨[X, Y], m⟩, fixed once empirically on
/// deterministic random inputs; throws StructuralBugError if neither sign
/// closes the identity.
int coad_pairing_sign();

/// |pairing(Y, coad(X, m)) − σ·pairing([X, Y], m)| for the recorded σ.
double coad_defect(const AlgebraElement& x, const DualPoint& m, const AlgebraElement& y);

/// Relative norm of the cyclic sum [[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y]
/// (field slots and central components together).
double jacobi_defect(const AlgebraElement& x, const AlgebraElement& y, const AlgebraElement& z);

enum class Cocycle { GelfandFuchs, Loop };

double cocycle_value(Cocycle which, const AlgebraElement& x, const AlgebraElement& y);

/// Relative defect of the cocycle identity ω([X,Y],Z) + ω([Y,Z],X) + ω([Z,X],Y) = 0.
double cocycle_defect(Cocycle which, const AlgebraElement& x, const AlgebraElement& y,
                      const AlgebraElement& z);

double element_norm(const AlgebraElement& x);
double dual_norm(const DualPoint& m);

}  // namespace lcv
