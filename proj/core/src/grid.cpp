#include "kvnlab/grid.hpp"

#include "kvnlab/error.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

namespace kvnlab {

namespace {

struct PlanKey {
    int n;
    int howmany;
    int stride;
    int dist;
    int sign;
    auto tie() const { return std::tie(n, howmany, stride, dist, sign); }
    bool operator<(const PlanKey& o) const { return tie() < o.tie(); }
};

// Plans are created once under a lock and then executed lock-free on caller
// buffers through the new-array interface, which FFTW documents as thread safe.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) {
            fftw_destroy_plan(plan);
        }
    }

    fftw_plan get(const PlanKey& key) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find(key);
        if (it != plans_.end()) {
            return it->second;
        }
        const std::size_t span = static_cast<std::size_t>(key.n - 1) * key.stride +
                                 static_cast<std::size_t>(key.howmany - 1) * key.dist + 1;
        fftw_complex* scratch = fftw_alloc_complex(span);
        int n = key.n;
        fftw_plan plan = fftw_plan_many_dft(1, &n, key.howmany, scratch, nullptr, key.stride,
                                            key.dist, scratch, nullptr, key.stride, key.dist,
                                            key.sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(scratch);
        if (plan == nullptr) {
            throw NumericalError("fftw: plan creation failed for n=" + std::to_string(key.n));
        }
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

void run_plan(cplx* data, int n, int howmany, int stride, int dist, FftDirection dir) {
    const int sign = dir == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan plan = plan_cache().get(PlanKey{n, howmany, stride, dist, sign});
    auto* raw = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, raw, raw);
}

void scale(ComplexField& f, double s) {
    for (auto& v : f) {
        v *= s;
    }
}

cplx ik_power(double k, int order) {
    cplx base(0.0, k);
    cplx out(1.0, 0.0);
    for (int i = 0; i < order; ++i) {
        out *= base;
    }
    return out;
}

void check_order(int order, int max_order) {
    if (order < 1) {
        throw InvalidArgument("spectral_derivative: order must be >= 1");
    }
    if (order > max_order) {
        throw InvalidArgument("spectral_derivative: order " + std::to_string(order) +
                              " exceeds cap " + std::to_string(max_order));
    }
}

}  // namespace

Grid1D::Grid1D(std::size_t n, double x_min, double x_max)
    : n_(n), x_min_(x_min), x_max_(x_max), dx_(0.0) {
    if (n < 8 || !is_power_of_two(n)) {
        throw InvalidArgument("Grid1D: n must be a power of two >= 8, got " + std::to_string(n));
    }
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
        throw InvalidArgument("Grid1D: require finite x_max > x_min");
    }
    dx_ = (x_max - x_min) / static_cast<double>(n);
    points_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        points_[k] = point(k);
    }
}

bool is_power_of_two(std::size_t n) noexcept {
    return n != 0 && (n & (n - 1)) == 0;
}

RealField wavenumbers(const Grid1D& g) {
    const std::size_t n = g.n();
    const double dk = 2.0 * pi / (static_cast<double>(n) * g.dx());
    RealField k(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double idx = j <= n / 2 ? static_cast<double>(j)
                                      : static_cast<double>(j) - static_cast<double>(n);
        k[j] = idx * dk;
    }
    return k;
}

void fft(ComplexField& f, FftDirection dir) {
    if (f.empty()) {
        return;
    }
    run_plan(f.data(), static_cast<int>(f.size()), 1, 1, 1, dir);
    if (dir == FftDirection::inverse) {
        scale(f, 1.0 / static_cast<double>(f.size()));
    }
}

void fft_axis(ComplexField& f, std::size_t rows, std::size_t cols, int axis, FftDirection dir) {
    if (f.size() != rows * cols) {
        throw GridMismatch("fft_axis: field size does not match rows*cols");
    }
    if (axis == 0) {
        run_plan(f.data(), static_cast<int>(rows), static_cast<int>(cols), static_cast<int>(cols), 1,
                 dir);
        if (dir == FftDirection::inverse) {
            scale(f, 1.0 / static_cast<double>(rows));
        }
    } else if (axis == 1) {
        run_plan(f.data(), static_cast<int>(cols), static_cast<int>(rows), 1, static_cast<int>(cols),
                 dir);
        if (dir == FftDirection::inverse) {
            scale(f, 1.0 / static_cast<double>(cols));
        }
    } else {
        throw InvalidArgument("fft_axis: axis must be 0 or 1");
    }
}

ComplexField spectral_derivative(const ComplexField& f, const Grid1D& g, int order, int max_order) {
    check_order(order, max_order);
    if (f.size() != g.n()) {
        throw GridMismatch("spectral_derivative: field length does not match grid");
    }
    ComplexField out = f;
    fft(out, FftDirection::forward);
    const RealField k = wavenumbers(g);
    const std::size_t n = g.n();
    for (std::size_t j = 0; j < n; ++j) {
        out[j] *= ik_power(k[j], order);
    }
    fft(out, FftDirection::inverse);
    return out;
}

ComplexField spectral_derivative(const ComplexField& f, const PhaseGrid& pg, int axis, int order,
                                 int max_order) {
    check_order(order, max_order);
    if (f.size() != pg.size()) {
        throw GridMismatch("spectral_derivative: field size does not match phase grid");
    }
    const std::size_t rows = pg.q.n();
    const std::size_t cols = pg.p.n();
    const Grid1D& g = axis == 0 ? pg.q : pg.p;
    const RealField k = wavenumbers(g);

    ComplexField out = f;
    fft_axis(out, rows, cols, axis, FftDirection::forward);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const std::size_t m = axis == 0 ? i : j;
            out[i * cols + j] *= ik_power(k[m], order);
        }
    }
    fft_axis(out, rows, cols, axis, FftDirection::inverse);
    return out;
}

}  // namespace kvnlab
