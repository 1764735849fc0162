#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace lcv {

enum class Axis { X, Y };

enum class ZeroModeRule {
    /// Reproduce the antiderivative display (∂x⁻¹f)(x,y) = ∫₀ˣf dξ − ∫₀^{2π}f dx
    /// exactly: the output vanishes at x = 0 rather than having zero x-mean.
    PaperConstant,
    /// Zero the k_axis = 0 modes of the output.
    MeanFree,
};

struct NonlocalConvention {
    ZeroModeRule zero_mode_rule = ZeroModeRule::PaperConstant;
    double resonance_tolerance = 1e-9;
};

/// Real band-limited function on the 2-torus [0,2π)², stored as complex
/// Fourier coefficients with Hermitian symmetry: u(x,y) = Σ c(k) e^{i(kx·x+ky·y)}.
/// Layout is FFT index order, row-major with x slowest; Nyquist rows are kept
/// zero by every constructor and product.
class SpectralField {
  public:
    SpectralField() = default;
    SpectralField(int nx, int ny);

    static SpectralField from_values(int nx, int ny, const std::vector<double>& values);
    static SpectralField from_function(int nx, int ny,
                                       const std::function<double(double, double)>& f);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    bool same_grid(const SpectralField& other) const {
        return nx_ == other.nx_ && ny_ == other.ny_;
    }

    /// Coefficient of mode (kx, ky); wavenumbers in [-n/2, n/2).
    std::complex<double>& at(int kx, int ky);
    const std::complex<double>& at(int kx, int ky) const;

    const std::vector<std::complex<double>>& coefficients() const { return coef_; }
    std::vector<std::complex<double>>& coefficients() { return coef_; }

    /// Grid values via inverse transform (real part).
    std::vector<double> values() const;
    /// Max |imaginary part| of the inverse transform; reality diagnostic.
    double max_imag() const;

    /// Restore exact Hermitian symmetry and zero the Nyquist rows.
    void enforce_reality();
    /// Zero all modes with |kx| > band or |ky| > band.
    void truncate_band(int band);
    /// Zero the k_axis = 0 row.
    void project_zero_row(Axis axis);
    /// L2 norm of the k_axis = 0 row, as a field norm (2π-weighted).
    double zero_row_norm(Axis axis) const;

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double s);

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
    friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
    SpectralField operator-() const;

    static int wavenumber(int index, int n) { return index <= n / 2 ? index : index - n; }
    static int index_of(int k, int n) { return k >= 0 ? k : k + n; }

  private:
    int nx_ = 0, ny_ = 0;
    std::vector<std::complex<double>> coef_;
};

/// Spectral derivative: multiply mode k by (i·k_axis)^order.
SpectralField derive(const SpectralField& phi, Axis axis, int order = 1);

/// The paper's nonlocal antiderivative along an axis. Requires the k_axis = 0
/// modes of the input to vanish below the convention tolerance.
SpectralField antiderive(const SpectralField& phi, Axis axis,
                         const NonlocalConvention& convention = {});

/// Λ = -∂x + c·∂y and its inverse on the non-resonant subspace.
SpectralField lambda_apply(const SpectralField& phi, double c);
SpectralField lambda_invert(const SpectralField& phi, double c,
                            const NonlocalConvention& convention = {});

/// Pointwise product with 2/3-rule dealiasing (inputs and output truncated
/// to |k| <= (n-1)/3 on each axis).
SpectralField multiply(const SpectralField& a, const SpectralField& b);

/// L2 pairing ∫ φψ dxdy, computed spectrally (exact for band-limited data).
double inner(const SpectralField& a, const SpectralField& b);

double l2_norm(const SpectralField& a);
double max_abs(const SpectralField& a);
double mean_value(const SpectralField& a);

/// Deterministic Hermitian band-limited field with zero mean; mode content
/// depends only on (seed, band), not on the grid, and the result is scaled
/// to L2 norm `amplitude`.
SpectralField random_field(std::uint64_t seed, int band, double amplitude, int nx, int ny);

/// Zero-pad / truncate modes onto another grid.
SpectralField resample(const SpectralField& a, int nx, int ny);

/// Exchange the roles of x and y: result(x,y) = a(y,x). Requires nx == ny.
SpectralField transpose_xy(const SpectralField& a);

int dealias_band(int n);

/// Snapshot serialization: one-line JSON header {"nx":..,"ny":..,"t":..}
/// followed by nx rows of ny comma-separated grid values. Shortest-repr
/// formatting makes the text encode the doubles exactly: parsing recovers the
/// written grid values bit for bit.
void write_field_csv(std::ostream& os, const SpectralField& field, double t);

struct FieldCsv {
    int nx = 0, ny = 0;
    double t = 0.0;
    std::vector<double> values;
};

FieldCsv read_field_csv_raw(std::istream& is);
SpectralField read_field_csv(std::istream& is, double* t_out = nullptr);

}  // namespace lcv
