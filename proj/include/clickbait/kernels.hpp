#pragma once

// Dense inner loops used by the autodiff ops and the stump search.
//
// Every kernel exists twice: `serial` is the reference, `omp` splits the
// outermost independent loop across OpenMP threads. Each output element is
// produced by exactly one thread with the same accumulation order as the
// serial code, so the two agree bit-for-bit and training stays
// deterministic for any thread count.

#include <cstddef>
#include <span>

namespace clickbait::kernels {

struct Conv1dDims {
    std::size_t batch = 0;
    std::size_t length = 0;     // input time steps
    std::size_t channels = 0;   // input features per step
    std::size_t width = 0;      // kernel taps
    std::size_t filters = 0;

    std::size_t out_length() const { return length - width + 1; }
};

#define CLICKBAIT_KERNEL_DECLS                                                                     \
    /* C[n,m] (+)= A[n,k] * B[k,m] */                                                              \
    void matmul(std::span<const double> a, std::span<const double> b, std::span<double> c,         \
                std::size_t n, std::size_t k, std::size_t m, bool accumulate);                     \
    /* C[k,m] += A[n,k]^T * B[n,m] */                                                              \
    void matmul_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,      \
                   std::size_t n, std::size_t k, std::size_t m);                                   \
    /* C[n,k] += A[n,m] * B[k,m]^T */                                                              \
    void matmul_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,      \
                   std::size_t n, std::size_t m, std::size_t k);                                   \
    /* Y[b,t,f] = bias[f] + sum_{w,c} X[b,t+w,c] W[w,c,f]   (valid padding) */                     \
    void conv1d_forward(std::span<const double> x, std::span<const double> w,                      \
                        std::span<const double> bias, std::span<double> y, const Conv1dDims& d);   \
    /* dX[b,t+w,c] += sum_f dY[b,t,f] W[w,c,f] */                                                  \
    void conv1d_backward_input(std::span<const double> dy, std::span<const double> w,              \
                               std::span<double> dx, const Conv1dDims& d);                         \
    /* dW[w,c,f] += sum_{b,t} X[b,t+w,c] dY[b,t,f] */                                              \
    void conv1d_backward_kernel(std::span<const double> x, std::span<const double> dy,             \
                                std::span<double> dw, const Conv1dDims& d);

namespace serial {
CLICKBAIT_KERNEL_DECLS
}  // namespace serial

namespace omp {
CLICKBAIT_KERNEL_DECLS
}  // namespace omp

// Dispatching entry points: OpenMP when enabled and available, else serial.
CLICKBAIT_KERNEL_DECLS

#undef CLICKBAIT_KERNEL_DECLS

void set_parallel(bool enabled);
bool parallel_enabled();
/// Threads the OpenMP kernels will use (1 when built without OpenMP).
int max_threads();

}  // namespace clickbait::kernels
