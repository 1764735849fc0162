#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lcv/spectral_field.hpp"

namespace lcv::jet {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kDefaultOrderCap = 8;

enum class FieldId : std::uint8_t { F, A };

/// A formal symbol for a field derivative (or antiderivative) treated as an
/// independent coordinate: orders are signed, negative meaning ∂⁻¹ powers.
/// A canonical variable never mixes positive and negative order on one axis
/// (there is only one slot per axis), matching the mean-free convention
/// ∂x⁻¹∂x = id under which opposite orders cancel.
struct JetVariable {
    FieldId field = FieldId::F;
    int x_order = 0;
    int y_order = 0;

    int total_order() const { return std::abs(x_order) + std::abs(y_order); }
    auto operator<=>(const JetVariable&) const = default;
    std::string str() const;
};

/// Multiset of jet variables; factors kept sorted, exponents >= 1.
class Monomial {
  public:
    Monomial() = default;

    const std::vector<std::pair<JetVariable, int>>& factors() const { return factors_; }
    int degree() const;
    int degree(FieldId field) const;
    int order_sum(Axis axis) const;
    bool is_constant() const { return factors_.empty(); }
    bool is_local() const;

    Monomial times(const JetVariable& v, int exp = 1) const;
    /// Remove one power of v; v must be present.
    Monomial divided_by(const JetVariable& v) const;
    int exponent(const JetVariable& v) const;

    bool operator==(const Monomial&) const = default;
    std::string str() const;

    /// Graded reverse-lexicographic order over variables ordered by
    /// (field, x_order, y_order).
    static bool degrevlex_less(const Monomial& a, const Monomial& b);

  private:
    std::vector<std::pair<JetVariable, int>> factors_;
};

/// Map comparator placing the degrevlex-leading monomial first.
struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return Monomial::degrevlex_less(b, a);
    }
};

/// Differential polynomial with exact rational coefficients. Zero
/// coefficients are never stored, so equal polynomials have identical
/// representations.
class DiffPoly {
  public:
    using TermMap = std::map<Monomial, Rational, MonomialOrder>;

    DiffPoly() = default;

    static DiffPoly constant(Rational c);
    static DiffPoly variable(const JetVariable& v);
    static DiffPoly field(FieldId f) { return variable({f, 0, 0}); }

    bool is_zero() const { return terms_.empty(); }
    bool is_local() const;
    const TermMap& terms() const { return terms_; }
    std::set<JetVariable> variables() const;
    int max_total_order() const;

    void add_term(const Monomial& m, const Rational& c);

    DiffPoly& operator+=(const DiffPoly& other);
    DiffPoly& operator-=(const DiffPoly& other);
    DiffPoly operator-() const;
    friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
    friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
    friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);
    friend DiffPoly operator*(const Rational& c, const DiffPoly& p);

    /// Polynomial partial derivative with respect to one jet variable.
    DiffPoly partial(const JetVariable& v) const;

    bool operator==(const DiffPoly&) const = default;

  private:
    TermMap terms_;
};

/// Total derivative D_axis via the Leibniz rule; every variable's order on
/// the axis is incremented (this realizes ∂x⁻¹∂x = id on negative orders).
DiffPoly total_derivative(const DiffPoly& p, Axis axis, int cap = kDefaultOrderCap);

/// Formal antiderivative along an axis. Defined only when every monomial is
/// a single variable (the antiderivative of a genuine product leaves the jet
/// algebra); throws UnsupportedInputError otherwise.
DiffPoly total_antiderivative(const DiffPoly& p, Axis axis, int cap = kDefaultOrderCap);

/// Euler variational operator: δ_field h = Σ_v (-1)^{|px|+|py|} D_x^{px} D_y^{py} (∂h/∂v)
/// over the jet variables v = (field, px, py) present in h, including the
/// nonlocal terms with D^{-1} powers.
DiffPoly variational_derivative(const DiffPoly& h, FieldId field, int cap = kDefaultOrderCap);

/// Canonical representative of a local polynomial modulo im(D_x) + im(D_y),
/// computed grade by grade by exact Gaussian elimination. Two local
/// polynomials with equal integrals over T² for all field values reduce to
/// the same normal form.
DiffPoly ibp_normal_form(const DiffPoly& p);

/// Deterministic plain-text expression grammar: `coef * F[p,q] * A[r,s] ...`
/// with terms joined by " + " and signs carried by the rational coefficient.
std::string to_string(const DiffPoly& p);
DiffPoly parse(std::string_view text);

struct EvalOptions {
    NonlocalConvention convention;
    /// Project away k_axis = 0 rows before applying antiderivatives instead
    /// of erroring on them.
    bool project_zero_modes = false;
};

struct Assignment {
    const SpectralField* f = nullptr;
    const SpectralField* a = nullptr;
    const SpectralField& get(FieldId id) const;
};

/// Pointwise evaluation using spectral derivatives/antiderivatives; products
/// dealiased.
SpectralField evaluate(const DiffPoly& p, const Assignment& fields,
                       const EvalOptions& options = {});

/// ∫_{T²} p dxdy = (2π)² × zero Fourier mode of evaluate(p).
double integrate_functional(const DiffPoly& p, const Assignment& fields,
                            const EvalOptions& options = {});

}  // namespace lcv::jet
