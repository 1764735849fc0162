#include "lcv/jet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lcv/errors.hpp"

namespace lcv::jet {

std::string JetVariable::str() const {
    std::ostringstream os;
    os << (field == FieldId::F ? 'F' : 'A') << '[' << x_order << ',' << y_order << ']';
    return os.str();
}

int Monomial::degree() const {
    int d = 0;
    for (const auto& [v, e] : factors_) d += e;
    return d;
}

int Monomial::degree(FieldId field) const {
    int d = 0;
    for (const auto& [v, e] : factors_)
        if (v.field == field) d += e;
    return d;
}

int Monomial::order_sum(Axis axis) const {
    int s = 0;
    for (const auto& [v, e] : factors_) s += e * (axis == Axis::X ? v.x_order : v.y_order);
    return s;
}

bool Monomial::is_local() const {
    for (const auto& [v, e] : factors_)
        if (v.x_order < 0 || v.y_order < 0) return false;
    return true;
}

Monomial Monomial::times(const JetVariable& v, int exp) const {
    Monomial out = *this;
    auto it = std::lower_bound(out.factors_.begin(), out.factors_.end(), v,
                               [](const auto& p, const JetVariable& q) { return p.first < q; });
    if (it != out.factors_.end() && it->first == v)
        it->second += exp;
    else
        out.factors_.insert(it, {v, exp});
    return out;
}

Monomial Monomial::divided_by(const JetVariable& v) const {
    Monomial out = *this;
    auto it = std::lower_bound(out.factors_.begin(), out.factors_.end(), v,
                               [](const auto& p, const JetVariable& q) { return p.first < q; });
    if (it == out.factors_.end() || !(it->first == v))
        throw Error("Monomial::divided_by: variable not present");
    if (--it->second == 0) out.factors_.erase(it);
    return out;
}

int Monomial::exponent(const JetVariable& v) const {
    for (const auto& [w, e] : factors_)
        if (w == v) return e;
    return 0;
}

std::string Monomial::str() const {
    if (factors_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, e] : factors_)
        for (int i = 0; i < e; ++i) {
            if (!first) os << " * ";
            os << v.str();
            first = false;
        }
    return os.str();
}

bool Monomial::degrevlex_less(const Monomial& a, const Monomial& b) {
    const int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    // Reverse lexicographic: walk variables from the largest down; at the
    // first differing exponent, the monomial with the larger exponent is the
    // smaller one.
    auto ia = a.factors_.rbegin(), ea = a.factors_.rend();
    auto ib = b.factors_.rbegin(), eb = b.factors_.rend();
    while (ia != ea || ib != eb) {
        if (ia == ea) return false;  // b has a variable above anything left in a
        if (ib == eb) return true;
        if (ia->first != ib->first) {
            // The monomial holding the larger variable has positive exponent
            // where the other has zero, so it is degrevlex-smaller.
            return ia->first > ib->first;
        }
        if (ia->second != ib->second) return ia->second > ib->second;
        ++ia;
        ++ib;
    }
    return false;
}

DiffPoly DiffPoly::constant(Rational c) {
    DiffPoly p;
    p.add_term(Monomial{}, c);
    return p;
}

DiffPoly DiffPoly::variable(const JetVariable& v) {
    DiffPoly p;
    p.add_term(Monomial{}.times(v), 1);
    return p;
}

bool DiffPoly::is_local() const {
    for (const auto& [m, c] : terms_)
        if (!m.is_local()) return false;
    return true;
}

std::set<JetVariable> DiffPoly::variables() const {
    std::set<JetVariable> out;
    for (const auto& [m, c] : terms_)
        for (const auto& [v, e] : m.factors()) out.insert(v);
    return out;
}

int DiffPoly::max_total_order() const {
    int cap = 0;
    for (const auto& [m, c] : terms_)
        for (const auto& [v, e] : m.factors()) cap = std::max(cap, v.total_order());
    return cap;
}

void DiffPoly::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& other) {
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& other) {
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
}

DiffPoly DiffPoly::operator-() const {
    DiffPoly out;
    for (const auto& [m, c] : terms_) out.add_term(m, -c);
    return out;
}

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
    DiffPoly out;
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            Monomial m = ma;
            for (const auto& [v, e] : mb.factors()) m = m.times(v, e);
            out.add_term(m, ca * cb);
        }
    }
    return out;
}

DiffPoly operator*(const Rational& c, const DiffPoly& p) {
    DiffPoly out;
    for (const auto& [m, k] : p.terms_) out.add_term(m, c * k);
    return out;
}

DiffPoly DiffPoly::partial(const JetVariable& v) const {
    DiffPoly out;
    for (const auto& [m, c] : terms_) {
        const int e = m.exponent(v);
        if (e == 0) continue;
        out.add_term(m.divided_by(v), c * e);
    }
    return out;
}

namespace {

JetVariable bumped(const JetVariable& v, Axis axis, int delta, int cap,
                   const Monomial& context) {
    JetVariable w = v;
    (axis == Axis::X ? w.x_order : w.y_order) += delta;
    if (w.total_order() > cap) throw OrderCapError(context.str(), cap);
    return w;
}

}  // namespace

DiffPoly total_derivative(const DiffPoly& p, Axis axis, int cap) {
    DiffPoly out;
    for (const auto& [m, c] : p.terms()) {
        for (const auto& [v, e] : m.factors()) {
            const JetVariable w = bumped(v, axis, +1, cap, m);
            out.add_term(m.divided_by(v).times(w), c * e);
        }
    }
    return out;
}

DiffPoly total_antiderivative(const DiffPoly& p, Axis axis, int cap) {
    DiffPoly out;
    for (const auto& [m, c] : p.terms()) {
        if (m.degree() != 1)
            throw UnsupportedInputError(
                "total_antiderivative: monomial '" + m.str() +
                "' is not a single jet variable; its antiderivative leaves the jet algebra");
        const JetVariable v = m.factors().front().first;
        const JetVariable w = bumped(v, axis, -1, cap, m);
        out.add_term(Monomial{}.times(w), c);
    }
    return out;
}

DiffPoly variational_derivative(const DiffPoly& h, FieldId field, int cap) {
    DiffPoly out;
    for (const JetVariable& v : h.variables()) {
        if (v.field != field) continue;
        DiffPoly term = h.partial(v);
        const int ax = std::abs(v.x_order), ay = std::abs(v.y_order);
        for (int i = 0; i < ax; ++i)
            term = v.x_order > 0 ? total_derivative(term, Axis::X, cap)
                                 : total_antiderivative(term, Axis::X, cap);
        for (int i = 0; i < ay; ++i)
            term = v.y_order > 0 ? total_derivative(term, Axis::Y, cap)
                                 : total_antiderivative(term, Axis::Y, cap);
        if ((ax + ay) % 2 != 0) term = -term;
        out += term;
    }
    return out;
}

// --- integration-by-parts normal form -------------------------------------

namespace {

struct Grade {
    int deg_f, deg_a, sum_x, sum_y;
    auto operator<=>(const Grade&) const = default;
};

Grade grade_of(const Monomial& m) {
    return {m.degree(FieldId::F), m.degree(FieldId::A), m.order_sum(Axis::X),
            m.order_sum(Axis::Y)};
}

// All local monomials of one field with `count` factors, order sums
// (sx, sy), factors chosen non-decreasing so each multiset appears once.
void enumerate_field_part(FieldId field, int count, int sx, int sy, const JetVariable& min_var,
                          Monomial prefix, std::vector<Monomial>& out) {
    if (count == 0) {
        if (sx == 0 && sy == 0) out.push_back(prefix);
        return;
    }
    for (int px = 0; px <= sx; ++px) {
        for (int py = 0; py <= sy; ++py) {
            JetVariable v{field, px, py};
            if (v < min_var) continue;
            // Remaining factors must each be >= v, so they can absorb the
            // leftover order sums only if enough remains per axis.
            if ((count - 1) * px > sx - px) continue;
            enumerate_field_part(field, count - 1, sx - px, sy - py, v, prefix.times(v), out);
        }
    }
}

std::vector<Monomial> enumerate_grade(const Grade& g) {
    std::vector<Monomial> out;
    for (int sxf = 0; sxf <= g.sum_x; ++sxf) {
        for (int syf = 0; syf <= g.sum_y; ++syf) {
            std::vector<Monomial> f_parts;
            enumerate_field_part(FieldId::F, g.deg_f, sxf, syf, JetVariable{FieldId::F, 0, 0},
                                 Monomial{}, f_parts);
            if (f_parts.empty()) continue;
            std::vector<Monomial> a_parts;
            enumerate_field_part(FieldId::A, g.deg_a, g.sum_x - sxf, g.sum_y - syf,
                                 JetVariable{FieldId::A, 0, 0}, Monomial{}, a_parts);
            for (const Monomial& fm : f_parts)
                for (const Monomial& am : a_parts) {
                    Monomial m = fm;
                    for (const auto& [v, e] : am.factors()) m = m.times(v, e);
                    out.push_back(m);
                }
        }
    }
    return out;
}

using Row = std::map<std::size_t, Rational>;  // column index -> coefficient

Row poly_to_row(const DiffPoly& p, const std::map<Monomial, std::size_t, MonomialOrder>& columns) {
    Row row;
    for (const auto& [m, c] : p.terms()) {
        auto it = columns.find(m);
        if (it == columns.end()) throw StructuralBugError("normal form: monomial outside grade basis");
        row[it->second] = c;
    }
    return row;
}

// Reduce `row` against the pivots; pivots map leading column -> normalized row.
void reduce_row(Row& row, const std::map<std::size_t, Row>& pivots) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = row.begin(); it != row.end();) {
            auto pivot = pivots.find(it->first);
            if (pivot == pivots.end()) {
                ++it;
                continue;
            }
            const Rational factor = it->second;
            for (const auto& [col, val] : pivot->second) {
                auto rit = row.find(col);
                if (rit == row.end()) {
                    row.emplace(col, -factor * val);
                } else {
                    rit->second -= factor * val;
                    if (rit->second == 0) row.erase(rit);
                }
            }
            it = row.begin();
            changed = true;
        }
    }
}

}  // namespace

DiffPoly ibp_normal_form(const DiffPoly& p) {
    if (!p.is_local())
        throw UnsupportedInputError("ibp_normal_form: nonlocal input is not supported");

    std::map<Grade, DiffPoly> by_grade;
    for (const auto& [m, c] : p.terms()) {
        DiffPoly t;
        t.add_term(m, c);
        by_grade[grade_of(m)] += t;
    }

    DiffPoly result;
    for (auto& [grade, part] : by_grade) {
        if (grade.deg_f + grade.deg_a == 0) continue;  // constants integrate to a constant: keep
        const std::vector<Monomial> basis = enumerate_grade(grade);
        std::map<Monomial, std::size_t, MonomialOrder> columns;
        {
            std::vector<Monomial> sorted = basis;
            std::sort(sorted.begin(), sorted.end(), [](const Monomial& x, const Monomial& y) {
                return MonomialOrder{}(x, y);
            });
            for (const Monomial& m : sorted) columns.emplace(m, columns.size());
        }

        // Span of D_x and D_y images of the two lower grades.
        std::map<std::size_t, Row> pivots;
        auto insert_image = [&](const DiffPoly& image) {
            Row row = poly_to_row(image, columns);
            reduce_row(row, pivots);
            if (row.empty()) return;
            const auto lead = row.begin();
            const Rational inv = 1 / lead->second;
            Row normalized;
            for (const auto& [col, val] : row) normalized[col] = val * inv;
            // Back-substitute into existing pivots to keep reduced form.
            const std::size_t lead_col = normalized.begin()->first;
            for (auto& [pc, prow] : pivots) {
                auto hit = prow.find(lead_col);
                if (hit == prow.end()) continue;
                const Rational f = hit->second;
                for (const auto& [col, val] : normalized) {
                    auto rit = prow.find(col);
                    if (rit == prow.end()) {
                        prow.emplace(col, -f * val);
                    } else {
                        rit->second -= f * val;
                        if (rit->second == 0) prow.erase(rit);
                    }
                }
            }
            pivots.emplace(lead_col, std::move(normalized));
        };

        for (int axis = 0; axis < 2; ++axis) {
            Grade lower = grade;
            (axis == 0 ? lower.sum_x : lower.sum_y) -= 1;
            if ((axis == 0 ? lower.sum_x : lower.sum_y) < 0) continue;
            for (const Monomial& m : enumerate_grade(lower)) {
                DiffPoly gen;
                gen.add_term(m, 1);
                // No per-variable cap inside the quotient computation: the
                // image orders are bounded by the grade sums themselves.
                insert_image(total_derivative(gen, axis == 0 ? Axis::X : Axis::Y,
                                              grade.sum_x + grade.sum_y + 1));
            }
        }

        Row row = poly_to_row(part, columns);
        reduce_row(row, pivots);

        std::vector<Monomial> by_index(columns.size());
        for (const auto& [m, idx] : columns) by_index[idx] = m;
        for (const auto& [col, val] : row) result.add_term(by_index[col], val);
    }
    for (const auto& [m, c] : p.terms())
        if (m.is_constant()) result.add_term(m, c);
    return result;
}

// --- serialization ---------------------------------------------------------

std::string to_string(const DiffPoly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        if (!first) os << " + ";
        os << c.str();
        if (!m.is_constant()) os << " * " << m.str();
        first = false;
    }
    return os.str();
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
}

JetVariable parse_variable(std::string_view token) {
    token = trim(token);
    if (token.size() < 6 || (token[0] != 'F' && token[0] != 'A') || token[1] != '[' ||
        token.back() != ']')
        throw Error("DiffPoly parse: bad variable token '" + std::string(token) + "'");
    const FieldId field = token[0] == 'F' ? FieldId::F : FieldId::A;
    const std::string body(token.substr(2, token.size() - 3));
    const auto comma = body.find(',');
    if (comma == std::string::npos)
        throw Error("DiffPoly parse: bad variable token '" + std::string(token) + "'");
    return JetVariable{field, std::stoi(body.substr(0, comma)), std::stoi(body.substr(comma + 1))};
}

}  // namespace

DiffPoly parse(std::string_view text) {
    text = trim(text);
    if (text == "0") return {};
    DiffPoly out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t next = text.find(" + ", pos);
        std::string_view term =
            text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
        term = trim(term);
        if (term.empty()) throw Error("DiffPoly parse: empty term");

        std::size_t fpos = 0;
        std::size_t fnext = term.find(" * ", fpos);
        const std::string coef_token(
            trim(term.substr(fpos, fnext == std::string_view::npos ? std::string_view::npos
                                                                   : fnext - fpos)));
        Rational coef;
        try {
            coef = Rational(coef_token);
        } catch (const std::exception&) {
            throw Error("DiffPoly parse: bad coefficient '" + coef_token + "'");
        }
        Monomial m;
        while (fnext != std::string_view::npos) {
            fpos = fnext + 3;
            fnext = term.find(" * ", fpos);
            std::string_view var_token =
                term.substr(fpos, fnext == std::string_view::npos ? std::string_view::npos
                                                                  : fnext - fpos);
            m = m.times(parse_variable(var_token));
        }
        out.add_term(m, coef);
        if (next == std::string_view::npos) break;
        pos = next + 3;
    }
    return out;
}

// --- evaluation ------------------------------------------------------------

const SpectralField& Assignment::get(FieldId id) const {
    const SpectralField* ptr = id == FieldId::F ? f : a;
    if (!ptr) throw Error("evaluate: unassigned field");
    return *ptr;
}

namespace {

SpectralField eval_variable(const JetVariable& v, const Assignment& fields,
                            const EvalOptions& options) {
    SpectralField value = fields.get(v.field);
    for (Axis axis : {Axis::X, Axis::Y}) {
        const int order = axis == Axis::X ? v.x_order : v.y_order;
        if (order > 0) {
            value = derive(value, axis, order);
        } else if (order < 0) {
            for (int i = 0; i < -order; ++i) {
                if (options.project_zero_modes) value.project_zero_row(axis);
                value = antiderive(value, axis, options.convention);
            }
        }
    }
    return value;
}

}  // namespace

SpectralField evaluate(const DiffPoly& p, const Assignment& fields, const EvalOptions& options) {
    const SpectralField& base = fields.get(FieldId::F);
    SpectralField out(base.nx(), base.ny());
    std::map<JetVariable, SpectralField> cache;
    for (const auto& [m, c] : p.terms()) {
        SpectralField term(base.nx(), base.ny());
        bool started = false;
        for (const auto& [v, e] : m.factors()) {
            auto it = cache.find(v);
            if (it == cache.end()) it = cache.emplace(v, eval_variable(v, fields, options)).first;
            for (int i = 0; i < e; ++i) {
                term = started ? multiply(term, it->second) : it->second;
                started = true;
            }
        }
        const double coef = c.convert_to<double>();
        if (!started) {
            // Constant monomial.
            term.at(0, 0) = coef;
            out += term;
        } else {
            out += coef * term;
        }
    }
    return out;
}

double integrate_functional(const DiffPoly& p, const Assignment& fields,
                            const EvalOptions& options) {
    const SpectralField value = evaluate(p, fields, options);
    const double two_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
    return two_pi_sq * value.at(0, 0).real();
}

}  // namespace lcv::jet
