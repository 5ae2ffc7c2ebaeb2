#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace kvnlab {

using cplx = std::complex<double>;
using ComplexField = std::vector<cplx>;
using RealField = std::vector<double>;

inline constexpr double pi = 3.14159265358979323846;

// Uniform periodic lattice on [x_min, x_max). The right endpoint is excluded.
class Grid1D {
public:
    Grid1D(std::size_t n, double x_min, double x_max);

    std::size_t n() const noexcept { return n_; }
    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    double dx() const noexcept { return dx_; }
    double length() const noexcept { return x_max_ - x_min_; }
    double point(std::size_t k) const noexcept { return x_min_ + static_cast<double>(k) * dx_; }
    const RealField& points() const noexcept { return points_; }

    // Fractional index of x, i.e. (x - x_min)/dx.
    double locate(double x) const noexcept { return (x - x_min_) / dx_; }

    friend bool operator==(const Grid1D& a, const Grid1D& b) noexcept {
        return a.n_ == b.n_ && a.x_min_ == b.x_min_ && a.x_max_ == b.x_max_;
    }

private:
    std::size_t n_;
    double x_min_;
    double x_max_;
    double dx_;
    RealField points_;
};

// Phase-space lattice. Fields on it are row-major with p contiguous:
// index(iq, ip) = iq * p.n() + ip.
struct PhaseGrid {
    Grid1D q;
    Grid1D p;

    PhaseGrid(Grid1D q_grid, Grid1D p_grid) : q(std::move(q_grid)), p(std::move(p_grid)) {}

    std::size_t size() const noexcept { return q.n() * p.n(); }
    double cell_area() const noexcept { return q.dx() * p.dx(); }
    std::size_t index(std::size_t iq, std::size_t ip) const noexcept { return iq * p.n() + ip; }

    friend bool operator==(const PhaseGrid& a, const PhaseGrid& b) noexcept {
        return a.q == b.q && a.p == b.p;
    }
};

bool is_power_of_two(std::size_t n) noexcept;

// DFT frequencies in standard ordering, scaled by 2*pi/(n*dx).
RealField wavenumbers(const Grid1D& g);

enum class FftDirection { forward, inverse };

// In-place 1D DFT. The inverse is normalized by 1/n so that a round trip is the identity.
void fft(ComplexField& f, FftDirection dir);

// Transforms a row-major rows x cols field along one axis.
// axis 0 runs over rows (stride cols), axis 1 over columns (contiguous).
void fft_axis(ComplexField& f, std::size_t rows, std::size_t cols, int axis, FftDirection dir);

inline constexpr int default_max_derivative_order = 4;

ComplexField spectral_derivative(const ComplexField& f, const Grid1D& g, int order,
                                 int max_order = default_max_derivative_order);

// Same, taken along one axis of a PhaseGrid field (0 = q, 1 = p).
ComplexField spectral_derivative(const ComplexField& f, const PhaseGrid& pg, int axis, int order,
                                 int max_order = default_max_derivative_order);

}  // namespace kvnlab
