#include "lcv/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "lcv/errors.hpp"
#include "lcv/fft.hpp"
#include "lcv/numio.hpp"
#include "lcv/rng.hpp"

namespace lcv {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_even_grid(int nx, int ny) {
    if (nx < 2 || ny < 2 || nx % 2 != 0 || ny % 2 != 0)
        throw ConfigError("grid sizes must be even and >= 2");
}
}  // namespace

SpectralField::SpectralField(int nx, int ny) : nx_(nx), ny_(ny), coef_(std::size_t(nx) * ny) {
    check_even_grid(nx, ny);
}

std::complex<double>& SpectralField::at(int kx, int ky) {
    return coef_[std::size_t(index_of(kx, nx_)) * ny_ + index_of(ky, ny_)];
}

const std::complex<double>& SpectralField::at(int kx, int ky) const {
    return coef_[std::size_t(index_of(kx, nx_)) * ny_ + index_of(ky, ny_)];
}

SpectralField SpectralField::from_values(int nx, int ny, const std::vector<double>& values) {
    check_even_grid(nx, ny);
    if (values.size() != std::size_t(nx) * ny)
        throw ConfigError("from_values: value count does not match grid");
    SpectralField out(nx, ny);
    for (std::size_t i = 0; i < values.size(); ++i) out.coef_[i] = values[i];
    fft::forward(nx, ny, out.coef_.data());
    const double scale = 1.0 / (double(nx) * ny);
    for (auto& c : out.coef_) c *= scale;
    out.enforce_reality();
    return out;
}

SpectralField SpectralField::from_function(int nx, int ny,
                                           const std::function<double(double, double)>& f) {
    check_even_grid(nx, ny);
    std::vector<double> values(std::size_t(nx) * ny);
    for (int ix = 0; ix < nx; ++ix) {
        const double x = kTwoPi * ix / nx;
        for (int iy = 0; iy < ny; ++iy) {
            const double y = kTwoPi * iy / ny;
            values[std::size_t(ix) * ny + iy] = f(x, y);
        }
    }
    return from_values(nx, ny, values);
}

std::vector<double> SpectralField::values() const {
    std::vector<std::complex<double>> work = coef_;
    fft::inverse(nx_, ny_, work.data());
    std::vector<double> out(work.size());
    for (std::size_t i = 0; i < work.size(); ++i) out[i] = work[i].real();
    return out;
}

double SpectralField::max_imag() const {
    std::vector<std::complex<double>> work = coef_;
    fft::inverse(nx_, ny_, work.data());
    double m = 0.0;
    for (const auto& c : work) m = std::max(m, std::abs(c.imag()));
    return m;
}

void SpectralField::enforce_reality() {
    // Average c(k) with conj(c(-k)); then kill the Nyquist rows, which cannot
    // carry a Hermitian partner on an even grid.
    for (int ix = 0; ix < nx_; ++ix) {
        const int jx = (nx_ - ix) % nx_;
        for (int iy = 0; iy < ny_; ++iy) {
            const int jy = (ny_ - iy) % ny_;
            if (std::size_t(ix) * ny_ + iy > std::size_t(jx) * ny_ + jy) continue;
            std::complex<double>& a = coef_[std::size_t(ix) * ny_ + iy];
            std::complex<double>& b = coef_[std::size_t(jx) * ny_ + jy];
            const std::complex<double> avg = 0.5 * (a + std::conj(b));
            a = avg;
            b = std::conj(avg);
        }
    }
    for (int iy = 0; iy < ny_; ++iy) coef_[std::size_t(nx_ / 2) * ny_ + iy] = 0.0;
    for (int ix = 0; ix < nx_; ++ix) coef_[std::size_t(ix) * ny_ + ny_ / 2] = 0.0;
}

void SpectralField::truncate_band(int band) {
    for (int ix = 0; ix < nx_; ++ix) {
        const int kx = wavenumber(ix, nx_);
        for (int iy = 0; iy < ny_; ++iy) {
            const int ky = wavenumber(iy, ny_);
            if (std::abs(kx) > band || std::abs(ky) > band)
                coef_[std::size_t(ix) * ny_ + iy] = 0.0;
        }
    }
}

void SpectralField::project_zero_row(Axis axis) {
    if (axis == Axis::X) {
        for (int iy = 0; iy < ny_; ++iy) coef_[iy] = 0.0;
    } else {
        for (int ix = 0; ix < nx_; ++ix) coef_[std::size_t(ix) * ny_] = 0.0;
    }
}

double SpectralField::zero_row_norm(Axis axis) const {
    double sum = 0.0;
    if (axis == Axis::X) {
        for (int iy = 0; iy < ny_; ++iy) sum += std::norm(coef_[iy]);
    } else {
        for (int ix = 0; ix < nx_; ++ix) sum += std::norm(coef_[std::size_t(ix) * ny_]);
    }
    return kTwoPi * std::sqrt(sum);
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    if (!same_grid(other)) throw GridMismatchError("operator+=: grid mismatch");
    for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] += other.coef_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    if (!same_grid(other)) throw GridMismatchError("operator-=: grid mismatch");
    for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] -= other.coef_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& c : coef_) c *= s;
    return *this;
}

SpectralField SpectralField::operator-() const {
    SpectralField out = *this;
    out *= -1.0;
    return out;
}

SpectralField derive(const SpectralField& phi, Axis axis, int order) {
    if (order < 1) throw ConfigError("derive: order must be >= 1");
    SpectralField out(phi.nx(), phi.ny());
    const int n_axis = axis == Axis::X ? phi.nx() : phi.ny();
    for (int ix = 0; ix < phi.nx(); ++ix) {
        const int kx = SpectralField::wavenumber(ix, phi.nx());
        for (int iy = 0; iy < phi.ny(); ++iy) {
            const int ky = SpectralField::wavenumber(iy, phi.ny());
            const int k = axis == Axis::X ? kx : ky;
            if (std::abs(k) == n_axis / 2) continue;  // Nyquist stays zero
            std::complex<double> mult = std::pow(std::complex<double>(0.0, k), order);
            out.at(kx, ky) = mult * phi.at(kx, ky);
        }
    }
    return out;
}

SpectralField antiderive(const SpectralField& phi, Axis axis,
                         const NonlocalConvention& convention) {
    // Solvability: the k_axis = 0 modes must vanish (up to tolerance).
    double offending = 0.0;
    if (axis == Axis::X) {
        for (int iy = 0; iy < phi.ny(); ++iy)
            offending = std::max(offending, std::abs(phi.at(0, SpectralField::wavenumber(iy, phi.ny()))));
    } else {
        for (int ix = 0; ix < phi.nx(); ++ix)
            offending = std::max(offending, std::abs(phi.at(SpectralField::wavenumber(ix, phi.nx()), 0)));
    }
    if (offending > convention.resonance_tolerance)
        throw SolvabilityError("antiderive: input has energy on the k_axis = 0 modes (max |mode| = " +
                                   format_double(offending) + ")",
                               offending);

    SpectralField out(phi.nx(), phi.ny());
    for (int ix = 0; ix < phi.nx(); ++ix) {
        const int kx = SpectralField::wavenumber(ix, phi.nx());
        for (int iy = 0; iy < phi.ny(); ++iy) {
            const int ky = SpectralField::wavenumber(iy, phi.ny());
            const int k = axis == Axis::X ? kx : ky;
            if (k == 0) continue;
            out.at(kx, ky) = phi.at(kx, ky) / std::complex<double>(0.0, k);
        }
    }
    if (convention.zero_mode_rule == ZeroModeRule::PaperConstant) {
        // ∫₀ˣ f dξ = A(x,y) − A(0,y) with A the mean-free antiderivative, so the
        // k_x = 0 row of the display equals −A(0, y): per transverse wavenumber,
        // minus the sum of the nonzero-k_x coefficients already stored in `out`.
        if (axis == Axis::X) {
            for (int iy = 0; iy < phi.ny(); ++iy) {
                const int ky = SpectralField::wavenumber(iy, phi.ny());
                std::complex<double> sum = 0.0;
                for (int ix = 1; ix < phi.nx(); ++ix)
                    sum += out.at(SpectralField::wavenumber(ix, phi.nx()), ky);
                out.at(0, ky) = -sum;
            }
        } else {
            for (int ix = 0; ix < phi.nx(); ++ix) {
                const int kx = SpectralField::wavenumber(ix, phi.nx());
                std::complex<double> sum = 0.0;
                for (int iy = 1; iy < phi.ny(); ++iy)
                    sum += out.at(kx, SpectralField::wavenumber(iy, phi.ny()));
                out.at(kx, 0) = -sum;
            }
        }
    }
    return out;
}

SpectralField lambda_apply(const SpectralField& phi, double c) {
    SpectralField out(phi.nx(), phi.ny());
    for (int ix = 0; ix < phi.nx(); ++ix) {
        const int kx = SpectralField::wavenumber(ix, phi.nx());
        for (int iy = 0; iy < phi.ny(); ++iy) {
            const int ky = SpectralField::wavenumber(iy, phi.ny());
            out.at(kx, ky) = std::complex<double>(0.0, -kx + c * ky) * phi.at(kx, ky);
        }
    }
    return out;
}

SpectralField lambda_invert(const SpectralField& phi, double c,
                            const NonlocalConvention& convention) {
    std::vector<std::pair<int, int>> obstructed;
    double worst = 0.0;
    SpectralField out(phi.nx(), phi.ny());
    for (int ix = 0; ix < phi.nx(); ++ix) {
        const int kx = SpectralField::wavenumber(ix, phi.nx());
        for (int iy = 0; iy < phi.ny(); ++iy) {
            const int ky = SpectralField::wavenumber(iy, phi.ny());
            const double symbol = -kx + c * ky;
            const std::complex<double> value = phi.at(kx, ky);
            if (std::abs(symbol) <= convention.resonance_tolerance) {
                if (std::abs(value) > convention.resonance_tolerance) {
                    obstructed.emplace_back(kx, ky);
                    worst = std::max(worst, std::abs(value));
                }
                continue;  // resonant mode with negligible energy: drop
            }
            out.at(kx, ky) = value / std::complex<double>(0.0, symbol);
        }
    }
    if (!obstructed.empty()) {
        std::ostringstream msg;
        msg << "lambda_invert: resonant modes carry energy (max |mode| = "
            << format_double(worst) << "):";
        for (auto [kx, ky] : obstructed) msg << " (" << kx << "," << ky << ")";
        throw ResonanceError(msg.str(), std::move(obstructed));
    }
    return out;
}

int dealias_band(int n) { return (n - 1) / 3; }

SpectralField multiply(const SpectralField& a, const SpectralField& b) {
    if (!a.same_grid(b)) throw GridMismatchError("multiply: grid mismatch");
    const int nx = a.nx(), ny = a.ny();
    const int keep = std::min(dealias_band(nx), dealias_band(ny));

    SpectralField mask_a = a, mask_b = b;
    mask_a.truncate_band(keep);
    mask_b.truncate_band(keep);
    std::vector<std::complex<double>> wa = std::move(mask_a.coefficients());
    std::vector<std::complex<double>> wb = std::move(mask_b.coefficients());

    fft::inverse(nx, ny, wa.data());
    fft::inverse(nx, ny, wb.data());
    for (std::size_t i = 0; i < wa.size(); ++i) wa[i] *= wb[i];
    fft::forward(nx, ny, wa.data());
    const double scale = 1.0 / (double(nx) * ny);
    SpectralField out(nx, ny);
    out.coefficients() = std::move(wa);
    for (auto& c : out.coefficients()) c *= scale;
    out.truncate_band(keep);
    out.enforce_reality();
    return out;
}

double inner(const SpectralField& a, const SpectralField& b) {
    if (!a.same_grid(b)) throw GridMismatchError("inner: grid mismatch");
    // ∫ab = (2π)² Σ_k â(k) conj(b̂(k)) for real fields.
    double sum = 0.0;
    const auto& ca = a.coefficients();
    const auto& cb = b.coefficients();
    for (std::size_t i = 0; i < ca.size(); ++i)
        sum += ca[i].real() * cb[i].real() + ca[i].imag() * cb[i].imag();
    return kTwoPi * kTwoPi * sum;
}

double l2_norm(const SpectralField& a) { return std::sqrt(std::max(0.0, inner(a, a))); }

double max_abs(const SpectralField& a) {
    double m = 0.0;
    for (double v : a.values()) m = std::max(m, std::abs(v));
    return m;
}

double mean_value(const SpectralField& a) { return a.at(0, 0).real(); }

SpectralField random_field(std::uint64_t seed, int band, double amplitude, int nx, int ny) {
    if (band < 1) throw ConfigError("random_field: band must be >= 1");
    if (2 * band >= nx || 2 * band >= ny)
        throw ConfigError("random_field: band does not fit the grid");
    SpectralField out(nx, ny);
    // Mode content keyed by (kx, ky) only, so the same seed gives the same
    // field on any sufficiently large grid.
    for (int kx = -band; kx <= band; ++kx) {
        for (int ky = -band; ky <= band; ++ky) {
            const bool upper = ky > 0 || (ky == 0 && kx > 0);
            if (!upper) continue;
            Rng rng(seed, (std::uint64_t(std::uint32_t(kx)) << 32) ^ std::uint32_t(ky));
            const std::complex<double> c(rng.next_symm(), rng.next_symm());
            out.at(kx, ky) = c;
            out.at(-kx, -ky) = std::conj(c);
        }
    }
    const double norm = l2_norm(out);
    if (norm > 0.0) out *= amplitude / norm;
    return out;
}

SpectralField resample(const SpectralField& a, int nx, int ny) {
    SpectralField out(nx, ny);
    for (int ix = 0; ix < a.nx(); ++ix) {
        const int kx = SpectralField::wavenumber(ix, a.nx());
        if (std::abs(kx) > nx / 2 - 1) continue;
        for (int iy = 0; iy < a.ny(); ++iy) {
            const int ky = SpectralField::wavenumber(iy, a.ny());
            if (std::abs(ky) > ny / 2 - 1) continue;
            out.at(kx, ky) = a.at(kx, ky);
        }
    }
    out.enforce_reality();
    return out;
}

SpectralField transpose_xy(const SpectralField& a) {
    if (a.nx() != a.ny()) throw GridMismatchError("transpose_xy: grid must be square");
    SpectralField out(a.ny(), a.nx());
    for (int ix = 0; ix < a.nx(); ++ix) {
        const int kx = SpectralField::wavenumber(ix, a.nx());
        for (int iy = 0; iy < a.ny(); ++iy) {
            const int ky = SpectralField::wavenumber(iy, a.ny());
            out.at(ky, kx) = a.at(kx, ky);
        }
    }
    return out;
}

void write_field_csv(std::ostream& os, const SpectralField& field, double t) {
    os << "{\"nx\":" << field.nx() << ",\"ny\":" << field.ny()
       << ",\"t\":" << format_double(t) << "}\n";
    const std::vector<double> vals = field.values();
    const int nx = field.nx(), ny = field.ny();
    for (int ix = 0; ix < nx; ++ix) {
        for (int iy = 0; iy < ny; ++iy) {
            if (iy) os << ',';
            os << format_double(vals[std::size_t(ix) * ny + iy]);
        }
        os << '\n';
    }
}

FieldCsv read_field_csv_raw(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw Error("read_field_csv: missing header");
    auto field_of = [&header](const std::string& key) -> std::string {
        const std::string tag = "\"" + key + "\":";
        auto pos = header.find(tag);
        if (pos == std::string::npos) throw Error("read_field_csv: bad header");
        pos += tag.size();
        auto end = header.find_first_of(",}", pos);
        return header.substr(pos, end - pos);
    };
    FieldCsv out;
    out.nx = std::stoi(field_of("nx"));
    out.ny = std::stoi(field_of("ny"));
    out.t = parse_double(field_of("t"));
    out.values.reserve(std::size_t(out.nx) * out.ny);
    std::string line;
    for (int ix = 0; ix < out.nx; ++ix) {
        if (!std::getline(is, line)) throw Error("read_field_csv: truncated data");
        std::size_t pos = 0;
        for (int iy = 0; iy < out.ny; ++iy) {
            std::size_t next = line.find(',', pos);
            const std::size_t len = (next == std::string::npos ? line.size() : next) - pos;
            out.values.push_back(parse_double(std::string_view(line).substr(pos, len)));
            pos = next == std::string::npos ? line.size() : next + 1;
        }
    }
    return out;
}

SpectralField read_field_csv(std::istream& is, double* t_out) {
    const FieldCsv raw = read_field_csv_raw(is);
    if (t_out) *t_out = raw.t;
    return SpectralField::from_values(raw.nx, raw.ny, raw.values);
}

}  // namespace lcv
