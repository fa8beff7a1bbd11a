#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops used by the prior trainer and the image pipeline.
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant; the active set is picked once at startup from CPUID and can be
// overridden with force_isa() or the QUADSYN_KERNELS environment variable
// ("scalar" / "avx2"). Elementwise kernels produce bit-identical results on
// both paths; reduction-style kernels (gemm_nt, squared_distance) may differ
// in the last ulps because lane sums associate differently.
//
// All matrices are row-major, densely packed.
namespace quadsyn::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa();
void force_isa(Isa isa);  // throws if the requested ISA is unavailable
bool avx2_available();
const char* isa_name(Isa isa);

// c[m x n] = a[m x k] * b[k x n]
void gemm_nn(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c);

// c[m x n] = a[m x k] * b[n x k]^T   (row-by-row dot products)
void gemm_nt(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c);

// c[m x n] = a[k x m]^T * b[k x n]
void gemm_tn(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c);

// mat[r][c] += v[c] for every row r
void add_row_vector(std::size_t rows, std::size_t cols, double* mat, const double* v);

// out[c] = sum over rows of mat[r][c]
void col_sums(std::size_t rows, std::size_t cols, const double* mat, double* out);

void relu_forward(std::size_t n, const double* x, double* y);

// dx[i] = pre[i] > 0 ? dy[i] : 0
void relu_backward(std::size_t n, const double* pre, const double* dy, double* dx);

// One Adam update on a parameter block. bc1/bc2 are the bias corrections
// (1 - beta1^t), (1 - beta2^t) for the current step t.
void adam_step(std::size_t n, double* param, const double* grad,
               double* m, double* v, double lr, double beta1, double beta2,
               double eps, double bc1, double bc2);

// sum_i (a[i] - b[i])^2
double squared_distance(std::size_t n, const double* a, const double* b);

// out[i] = clamp(round_half_up((1 - alpha) * a[i] + alpha * b[i]), 0, 255)
void blend_u8(std::size_t n, const std::uint8_t* a, const std::uint8_t* b,
              double alpha, std::uint8_t* out);

// Scalar reference entry points, always available; the dispatched functions
// above must agree with these (exactly for elementwise kernels, to tight
// tolerance for reductions). Exposed so equivalence tests can pin both sides.
namespace scalar {
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b, double* c);
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b, double* c);
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b, double* c);
void add_row_vector(std::size_t rows, std::size_t cols, double* mat, const double* v);
void col_sums(std::size_t rows, std::size_t cols, const double* mat, double* out);
void relu_forward(std::size_t n, const double* x, double* y);
void relu_backward(std::size_t n, const double* pre, const double* dy, double* dx);
void adam_step(std::size_t n, double* param, const double* grad, double* m, double* v,
               double lr, double beta1, double beta2, double eps, double bc1, double bc2);
double squared_distance(std::size_t n, const double* a, const double* b);
void blend_u8(std::size_t n, const std::uint8_t* a, const std::uint8_t* b, double alpha, std::uint8_t* out);
}  // namespace scalar

#if defined(QUADSYN_HAVE_AVX2)
namespace avx2 {
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b, double* c);
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b, double* c);
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b, double* c);
void add_row_vector(std::size_t rows, std::size_t cols, double* mat, const double* v);
void col_sums(std::size_t rows, std::size_t cols, const double* mat, double* out);
void relu_forward(std::size_t n, const double* x, double* y);
void relu_backward(std::size_t n, const double* pre, const double* dy, double* dx);
void adam_step(std::size_t n, double* param, const double* grad, double* m, double* v,
               double lr, double beta1, double beta2, double eps, double bc1, double bc2);
double squared_distance(std::size_t n, const double* a, const double* b);
void blend_u8(std::size_t n, const std::uint8_t* a, const std::uint8_t* b, double alpha, std::uint8_t* out);
}  // namespace avx2
#endif

}  // namespace quadsyn::kernels
