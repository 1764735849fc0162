#include "lcv/poisson_magri.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "lcv/errors.hpp"
#include "lcv/numio.hpp"

namespace lcv {

DualPoint FrozenPoint::as_dual(int nx, int ny) const {
    SpectralField one(nx, ny);
    one.at(0, 0) = 1.0;
    return DualPoint(one, one, c1, c);
}

Functional::Functional(std::string name, GradientFn gradient, ValueFn value,
                       std::optional<jet::DiffPoly> integrand)
    : name_(std::move(name)),
      gradient_(std::move(gradient)),
      value_(std::move(value)),
      integrand_(std::move(integrand)) {}

Functional Functional::from_integrand(std::string name, jet::DiffPoly h,
                                      const jet::EvalOptions& options) {
    const jet::DiffPoly delta_a = jet::variational_derivative(h, jet::FieldId::A);
    const jet::DiffPoly delta_f = jet::variational_derivative(h, jet::FieldId::F);
    auto gradient = [delta_a, delta_f, options](const SpectralField& f,
                                                const SpectralField& a) -> GradientPair {
        const jet::Assignment fields{&f, &a};
        return {jet::evaluate(delta_a, fields, options), jet::evaluate(delta_f, fields, options)};
    };
    auto value = [h, options](const SpectralField& f, const SpectralField& a) -> double {
        const jet::Assignment fields{&f, &a};
        return jet::integrate_functional(h, fields, options);
    };
    const bool mean_free = !h.is_local();
    Functional out(std::move(name), std::move(gradient), std::move(value), std::move(h));
    validate_gradient(out, 24, 24, 3, 1e-5, mean_free);
    return out;
}

void validate_gradient(const Functional& H, int nx, int ny, int band, double tol,
                       bool mean_free_directions) {
    const double eps = 1e-5;
    SpectralField f = random_field(7001, band, 0.7, nx, ny);
    SpectralField a = random_field(7002, band, 0.9, nx, ny);
    for (int dir = 0; dir < 2; ++dir) {
        SpectralField phi = random_field(7100 + dir, band, 1.0, nx, ny);
        SpectralField psi = random_field(7200 + dir, band, 1.0, nx, ny);
        if (mean_free_directions) {
            // Gradients of nonlocal functionals are only pinned off the zero
            // rows; probe within the mean-free subspace.
            phi.project_zero_row(Axis::X);
            phi.project_zero_row(Axis::Y);
            psi.project_zero_row(Axis::X);
            psi.project_zero_row(Axis::Y);
        } else {
            // Random fields are zero-mean; add constant components so the
            // check also pins the gradients' means.
            phi.at(0, 0) += 0.3;
            psi.at(0, 0) -= 0.2;
        }

        const double plus = H.value(f + eps * phi, a + eps * psi);
        const double minus = H.value(f - eps * phi, a - eps * psi);
        const double fd = (plus - minus) / (2.0 * eps);
        const GradientPair d = H.gradient(f, a);
        const double pairing_value = inner(d.df, phi) + inner(d.da, psi);
        const double scale = 1.0 + std::max(std::abs(fd), std::abs(pairing_value));
        if (std::abs(fd - pairing_value) > tol * scale)
            throw StructuralBugError("functional '" + H.name() +
                                     "': gradient program disagrees with finite differences (fd=" +
                                     format_double(fd) + ", pairing=" +
                                     format_double(pairing_value) + ")");
    }
}

AlgebraElement gradient_as_element(const GradientPair& d) {
    return AlgebraElement(d.da, d.df, 0.0, 0.0);
}

TangentField ham_lie(const Functional& H, const DualPoint& m) {
    const GradientPair d = H.gradient(m.g, m.b);
    DualPoint out = coad(gradient_as_element(d), m);
    return {std::move(out.g), std::move(out.b)};
}

TangentField ham_const(const Functional& H, const FrozenPoint& fp, const SpectralField& f,
                       const SpectralField& a) {
    const GradientPair d = H.gradient(f, a);
    SpectralField ft = lambda_apply(d.da, fp.c);
    SpectralField at = 2.0 * derive(d.da, Axis::X) + lambda_apply(d.df, fp.c);
    if (fp.c1 != 0.0) at += fp.c1 * derive(d.da, Axis::X, 3);
    return {std::move(ft), std::move(at)};
}

TangentField ham_limit(const Functional& H, const SpectralField& f, const SpectralField& a) {
    const GradientPair d = H.gradient(f, a);
    return {derive(d.da, Axis::Y), derive(d.df, Axis::Y)};
}

double bracket_lie(const Functional& H, const Functional& G, const DualPoint& m) {
    const AlgebraElement x = gradient_as_element(H.gradient(m.g, m.b));
    const AlgebraElement y = gradient_as_element(G.gradient(m.g, m.b));
    return pairing(bracket(x, y), m);
}

double bracket_const(const Functional& H, const Functional& G, const FrozenPoint& fp,
                     const SpectralField& f, const SpectralField& a) {
    const AlgebraElement x = gradient_as_element(H.gradient(f, a));
    const AlgebraElement y = gradient_as_element(G.gradient(f, a));
    return pairing(bracket(x, y), fp.as_dual(f.nx(), f.ny()));
}

namespace {

DualPoint pencil_point(const FrozenPoint& fp, double lambda, const DualPoint& m) {
    DualPoint m0 = fp.as_dual(m.g.nx(), m.g.ny());
    return DualPoint(m0.g - lambda * m.g, m0.b - lambda * m.b, m0.c1 - lambda * m.c1,
                     m0.c2 - lambda * m.c2);
}

double pencil_bracket(double lambda, const Functional& A, const Functional& B,
                      const DualPoint& m, const FrozenPoint& fp) {
    const AlgebraElement x = gradient_as_element(A.gradient(m.g, m.b));
    const AlgebraElement y = gradient_as_element(B.gradient(m.g, m.b));
    return pairing(bracket(x, y), pencil_point(fp, lambda, m));
}

/// Finite-difference L² gradient of Φ over the field slots of m, returned as
/// an algebra element: the f-slot pairs with b-perturbations and vice versa.
AlgebraElement fd_gradient(const std::function<double(const DualPoint&)>& phi,
                           const DualPoint& m, double eps) {
    const int nx = m.g.nx(), ny = m.g.ny();
    const double cell = (2.0 * std::numbers::pi / nx) * (2.0 * std::numbers::pi / ny);
    std::vector<double> gv = m.g.values();
    std::vector<double> bv = m.b.values();
    std::vector<double> dg(gv.size()), db(bv.size());
    for (std::size_t p = 0; p < gv.size(); ++p) {
        const double keep = gv[p];
        gv[p] = keep + eps;
        const double plus = phi(DualPoint(SpectralField::from_values(nx, ny, gv), m.b, m.c1, m.c2));
        gv[p] = keep - eps;
        const double minus = phi(DualPoint(SpectralField::from_values(nx, ny, gv), m.b, m.c1, m.c2));
        gv[p] = keep;
        dg[p] = (plus - minus) / (2.0 * eps * cell);
    }
    for (std::size_t p = 0; p < bv.size(); ++p) {
        const double keep = bv[p];
        bv[p] = keep + eps;
        const double plus = phi(DualPoint(m.g, SpectralField::from_values(nx, ny, bv), m.c1, m.c2));
        bv[p] = keep - eps;
        const double minus = phi(DualPoint(m.g, SpectralField::from_values(nx, ny, bv), m.c1, m.c2));
        bv[p] = keep;
        db[p] = (plus - minus) / (2.0 * eps * cell);
    }
    return AlgebraElement(SpectralField::from_values(nx, ny, db),
                          SpectralField::from_values(nx, ny, dg));
}

}  // namespace

double pencil_jacobi_defect(double lambda, const Functional& F, const Functional& G,
                            const Functional& H, const DualPoint& m, const FrozenPoint& fp,
                            double fd_step) {
    const Functional* fns[3] = {&F, &G, &H};
    double sum = 0.0;
    double scale = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Functional& a = *fns[i];
        const Functional& b = *fns[(i + 1) % 3];
        const Functional& c = *fns[(i + 2) % 3];
        // {{a,b}_λ, c}_λ(m) = ⟨m₀ − λm, [d{a,b}_λ(m), dc(m)]⟩.
        auto inner_fn = [&](const DualPoint& at) { return pencil_bracket(lambda, a, b, at, fp); };
        const AlgebraElement d_inner = fd_gradient(inner_fn, m, fd_step);
        const AlgebraElement d_c = gradient_as_element(c.gradient(m.g, m.b));
        const double term = pairing(bracket(d_inner, d_c), pencil_point(fp, lambda, m));
        sum += term;
        scale = std::max(scale, std::abs(term));
    }
    return std::abs(sum) / (1.0 + scale);
}

Functional casimir_h0() {
    using jet::DiffPoly;
    const DiffPoly h = DiffPoly::field(jet::FieldId::A) - DiffPoly::field(jet::FieldId::F);
    return Functional::from_integrand("H0", h);
}

Functional h1_closed_form(double c, const NonlocalConvention& convention) {
    auto gradient = [c, convention](const SpectralField& f, const SpectralField& a) -> GradientPair {
        const SpectralField da = lambda_invert(derive(f, Axis::X), c, convention);
        const SpectralField df = lambda_invert(derive(a, Axis::X), c, convention) + 2.0 * da -
                                 2.0 * lambda_invert(derive(da, Axis::X), c, convention);
        return {da, df};
    };
    auto value = [c, convention](const SpectralField& f, const SpectralField& a) -> double {
        const SpectralField w = lambda_invert(derive(f, Axis::X), c, convention);
        const SpectralField w2 = lambda_invert(derive(w, Axis::X), c, convention);
        return inner(w, a) + inner(w, f) - inner(w2, f);
    };
    Functional out("H1", std::move(gradient), std::move(value));
    validate_gradient(out, 24, 24, 3);
    return out;
}

Functional h1_limit_form(const NonlocalConvention& convention) {
    using jet::DiffPoly;
    using jet::FieldId;
    using jet::JetVariable;
    const DiffPoly w = DiffPoly::variable(JetVariable{FieldId::F, 1, -1});
    const DiffPoly h = w * (DiffPoly::field(FieldId::A) + DiffPoly::field(FieldId::F));
    jet::EvalOptions options;
    options.convention = convention;
    options.project_zero_modes = true;
    return Functional::from_integrand("H1_limit", h, options);
}

GradientPair magri_step(const TangentField& xk, const FrozenPoint& fp,
                        const NonlocalConvention& convention) {
    SpectralField da = lambda_invert(xk.ft, fp.c, convention);
    SpectralField residual = xk.at - 2.0 * derive(da, Axis::X);
    if (fp.c1 != 0.0) residual -= fp.c1 * derive(da, Axis::X, 3);
    SpectralField df = lambda_invert(residual, fp.c, convention);
    return {std::move(da), std::move(df)};
}

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton iteration from the Chebyshev estimate on [-1, 1].
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
}

struct Hierarchy::State {
    Options options;
    double c1p = 0.0, c2p = 0.0;
    std::vector<Functional> built;
};

namespace {

double homotopy_value(int gauss_nodes, double quadrature_tol,
                      const Functional::GradientFn& gradient, const SpectralField& f,
                      const SpectralField& a) {
    auto quad = [&](int n) {
        std::vector<double> nodes, weights;
        gauss_legendre_01(n, nodes, weights);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const GradientPair d = gradient(nodes[i] * f, nodes[i] * a);
            sum += weights[i] * (inner(d.df, f) + inner(d.da, a));
        }
        return sum;
    };
    const double coarse = quad(gauss_nodes);
    const double fine = quad(2 * gauss_nodes);
    const double tol = quadrature_tol * (1.0 + std::abs(fine));
    if (std::abs(coarse - fine) > tol)
        throw AccuracyError("magri_reconstruct: homotopy quadrature did not converge (" +
                            format_double(coarse) + " vs " + format_double(fine) + ")");
    return fine;
}

}  // namespace

Hierarchy::Hierarchy(Options options) : state_(std::make_shared<State>()) {
    state_->options = options;
    state_->c1p = options.point_c1.value_or(options.fp.c1);
    state_->c2p = options.point_c2.value_or(options.fp.c);
    state_->built.push_back(casimir_h0());
    for (int k = 1; k <= kMaxHierarchyDepth; ++k) {
        const Functional& prev = state_->built.back();
        auto state = state_;
        Functional::GradientFn gradient = [state, prev](const SpectralField& f,
                                                        const SpectralField& a) -> GradientPair {
            const DualPoint m(f, a, state->c1p, state->c2p);
            const TangentField xk = ham_lie(prev, m);
            return magri_step(xk, state->options.fp, state->options.convention);
        };
        const int nodes = options.gauss_nodes;
        const double qtol = options.quadrature_tol;
        Functional::ValueFn value = [nodes, qtol, gradient](const SpectralField& f,
                                                            const SpectralField& a) -> double {
            return homotopy_value(nodes, qtol, gradient, f, a);
        };
        state_->built.emplace_back("H" + std::to_string(k), gradient, value);
    }
}

Functional Hierarchy::h(int k) const {
    if (k < 0 || k > kMaxHierarchyDepth)
        throw ConfigError("Hierarchy: depth capped at H" + std::to_string(kMaxHierarchyDepth));
    return state_->built[static_cast<std::size_t>(k)];
}

double Hierarchy::point_c1() const { return state_->c1p; }
double Hierarchy::point_c2() const { return state_->c2p; }

double magri_reconstruct(int k, const SpectralField& f, const SpectralField& a,
                         const Hierarchy::Options& options) {
    Hierarchy hierarchy(options);
    return hierarchy.h(k).value(f, a);
}

double tangent_norm(const TangentField& t) {
    return std::sqrt(inner(t.ft, t.ft) + inner(t.at, t.at));
}

double tangent_rel_defect(const TangentField& x, const TangentField& y) {
    const TangentField diff{x.ft - y.ft, x.at - y.at};
    return tangent_norm(diff) / (1.0 + std::max(tangent_norm(x), tangent_norm(y)));
}

}  // namespace lcv
