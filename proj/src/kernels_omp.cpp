#include <algorithm>

#include "clickbait/kernels.hpp"


namespace clickbait::kernels::omp {

namespace {
// Below this many output rows the fork/join cost dominates.
constexpr std::size_t kMinParallelRows = 8;
}  // namespace

void matmul(std::span<const double> a, std::span<const double> b, std::span<double> c, std::size_t n,
            std::size_t k, std::size_t m, bool accumulate) {
    #pragma omp parallel for schedule(static) if (n >= kMinParallelRows)
    for (std::size_t i = 0; i < n; ++i) {
        double* ci = c.data() + i * m;
        if (!accumulate) std::fill(ci, ci + m, 0.0);
        const double* ai = a.data() + i * k;
        for (std::size_t p = 0; p < k; ++p) {
            const double av = ai[p];
            const double* bp = b.data() + p * m;
            for (std::size_t j = 0; j < m; ++j) ci[j] += av * bp[j];
        }
    }
}

void matmul_tn(std::span<const double> a, std::span<const double> b, std::span<double> c, std::size_t n,
               std::size_t k, std::size_t m) {
    #pragma omp parallel for schedule(static) if (k >= kMinParallelRows)
    for (std::size_t p = 0; p < k; ++p) {
        double* cp = c.data() + p * m;
        for (std::size_t i = 0; i < n; ++i) {
            const double av = a[i * k + p];
            const double* bi = b.data() + i * m;
            for (std::size_t j = 0; j < m; ++j) cp[j] += av * bi[j];
        }
    }
}

void matmul_nt(std::span<const double> a, std::span<const double> b, std::span<double> c, std::size_t n,
               std::size_t m, std::size_t k) {
    #pragma omp parallel for schedule(static) if (n >= kMinParallelRows)
    for (std::size_t i = 0; i < n; ++i) {
        const double* ai = a.data() + i * m;
        for (std::size_t p = 0; p < k; ++p) {
            const double* bp = b.data() + p * m;
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j) s += ai[j] * bp[j];
            c[i * k + p] += s;
        }
    }
}

void conv1d_forward(std::span<const double> x, std::span<const double> w, std::span<const double> bias,
                    std::span<double> y, const Conv1dDims& d) {
    const std::size_t out_len = d.out_length();
    const std::size_t rows = d.batch * out_len;
    #pragma omp parallel for schedule(static) if (rows >= kMinParallelRows)
    for (std::size_t row = 0; row < rows; ++row) {
        const std::size_t b = row / out_len;
        const std::size_t t = row % out_len;
        double* yr = y.data() + row * d.filters;
        for (std::size_t f = 0; f < d.filters; ++f) yr[f] = bias.empty() ? 0.0 : bias[f];
        for (std::size_t tap = 0; tap < d.width; ++tap) {
            const double* xr = x.data() + (b * d.length + t + tap) * d.channels;
            const double* wt = w.data() + tap * d.channels * d.filters;
            for (std::size_t c = 0; c < d.channels; ++c) {
                const double xv = xr[c];
                const double* wc = wt + c * d.filters;
                for (std::size_t f = 0; f < d.filters; ++f) yr[f] += xv * wc[f];
            }
        }
    }
}

void conv1d_backward_input(std::span<const double> dy, std::span<const double> w, std::span<double> dx,
                           const Conv1dDims& d) {
    const std::size_t out_len = d.out_length();
    #pragma omp parallel for schedule(static) if (d.batch >= 2)
    for (std::size_t b = 0; b < d.batch; ++b) {
        for (std::size_t t = 0; t < out_len; ++t) {
            const double* dyr = dy.data() + (b * out_len + t) * d.filters;
            for (std::size_t tap = 0; tap < d.width; ++tap) {
                double* dxr = dx.data() + (b * d.length + t + tap) * d.channels;
                const double* wt = w.data() + tap * d.channels * d.filters;
                for (std::size_t c = 0; c < d.channels; ++c) {
                    const double* wc = wt + c * d.filters;
                    double s = 0.0;
                    for (std::size_t f = 0; f < d.filters; ++f) s += dyr[f] * wc[f];
                    dxr[c] += s;
                }
            }
        }
    }
}

void conv1d_backward_kernel(std::span<const double> x, std::span<const double> dy, std::span<double> dw,
                            const Conv1dDims& d) {
    const std::size_t out_len = d.out_length();
    const std::size_t taps = d.width * d.channels;
    #pragma omp parallel for schedule(static) if (taps >= kMinParallelRows)
    for (std::size_t tc = 0; tc < taps; ++tc) {
        const std::size_t tap = tc / d.channels;
        const std::size_t c = tc % d.channels;
        double* dwr = dw.data() + tc * d.filters;
        for (std::size_t b = 0; b < d.batch; ++b) {
            for (std::size_t t = 0; t < out_len; ++t) {
                const double xv = x[(b * d.length + t + tap) * d.channels + c];
                const double* dyr = dy.data() + (b * out_len + t) * d.filters;
                for (std::size_t f = 0; f < d.filters; ++f) dwr[f] += xv * dyr[f];
            }
        }
    }
}

}  // namespace clickbait::kernels::omp

#ifdef CLICKBAIT_HAVE_OPENMP
#include <omp.h>
#endif

namespace clickbait::kernels {

namespace {
bool g_parallel = true;

bool use_omp() {
#ifdef CLICKBAIT_HAVE_OPENMP
    return g_parallel;
#else
    return false;
#endif
}
}  // namespace

void set_parallel(bool enabled) { g_parallel = enabled; }
bool parallel_enabled() { return use_omp(); }

int max_threads() {
#ifdef CLICKBAIT_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void matmul(std::span<const double> a, std::span<const double> b, std::span<double> c, std::size_t n,
            std::size_t k, std::size_t m, bool accumulate) {
    if (use_omp())
        omp::matmul(a, b, c, n, k, m, accumulate);
    else
        serial::matmul(a, b, c, n, k, m, accumulate);
}

void matmul_tn(std::span<const double> a, std::span<const double> b, std::span<double> c, std::size_t n,
               std::size_t k, std::size_t m) {
    if (use_omp())
        omp::matmul_tn(a, b, c, n, k, m);
    else
        serial::matmul_tn(a, b, c, n, k, m);
}

void matmul_nt(std::span<const double> a, std::span<const double> b, std::span<double> c, std::size_t n,
               std::size_t m, std::size_t k) {
    if (use_omp())
        omp::matmul_nt(a, b, c, n, m, k);
    else
        serial::matmul_nt(a, b, c, n, m, k);
}

void conv1d_forward(std::span<const double> x, std::span<const double> w, std::span<const double> bias,
                    std::span<double> y, const Conv1dDims& d) {
    if (use_omp())
        omp::conv1d_forward(x, w, bias, y, d);
    else
        serial::conv1d_forward(x, w, bias, y, d);
}

void conv1d_backward_input(std::span<const double> dy, std::span<const double> w, std::span<double> dx,
                           const Conv1dDims& d) {
    if (use_omp())
        omp::conv1d_backward_input(dy, w, dx, d);
    else
        serial::conv1d_backward_input(dy, w, dx, d);
}

void conv1d_backward_kernel(std::span<const double> x, std::span<const double> dy, std::span<double> dw,
                            const Conv1dDims& d) {
    if (use_omp())
        omp::conv1d_backward_kernel(x, dy, dw, d);
    else
        serial::conv1d_backward_kernel(x, dy, dw, d);
}

}  // namespace clickbait::kernels
