#include "quadsyn/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace quadsyn::kernels {

namespace scalar {

void gemm_nn(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c) {
  std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      const double* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) {
        crow[j] += aip * brow[j];
      }
    }
  }
}

void gemm_nt(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    for (std::size_t j = 0; j < n; ++j) {
      const double* brow = b + j * k;
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) {
        acc += arow[p] * brow[p];
      }
      c[i * n + j] = acc;
    }
  }
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c) {
  std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t p = 0; p < k; ++p) {
    const double* arow = a + p * m;
    const double* brow = b + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double api = arow[i];
      double* crow = c + i * n;
      for (std::size_t j = 0; j < n; ++j) {
        crow[j] += api * brow[j];
      }
    }
  }
}

void add_row_vector(std::size_t rows, std::size_t cols, double* mat, const double* v) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* row = mat + r * cols;
    for (std::size_t c = 0; c < cols; ++c) {
      row[c] += v[c];
    }
  }
}

void col_sums(std::size_t rows, std::size_t cols, const double* mat, double* out) {
  std::memset(out, 0, cols * sizeof(double));
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = mat + r * cols;
    for (std::size_t c = 0; c < cols; ++c) {
      out[c] += row[c];
    }
  }
}

void relu_forward(std::size_t n, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = x[i] > 0.0 ? x[i] : 0.0;
  }
}

void relu_backward(std::size_t n, const double* pre, const double* dy, double* dx) {
  for (std::size_t i = 0; i < n; ++i) {
    dx[i] = pre[i] > 0.0 ? dy[i] : 0.0;
  }
}

void adam_step(std::size_t n, double* param, const double* grad, double* m, double* v,
               double lr, double beta1, double beta2, double eps, double bc1, double bc2) {
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grad[i];
    m[i] = beta1 * m[i] + (1.0 - beta1) * g;
    v[i] = beta2 * v[i] + (1.0 - beta2) * (g * g);
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    param[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

double squared_distance(std::size_t n, const double* a, const double* b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void blend_u8(std::size_t n, const std::uint8_t* a, const std::uint8_t* b,
              double alpha, std::uint8_t* out) {
  const double wa = 1.0 - alpha;
  for (std::size_t i = 0; i < n; ++i) {
    double mixed = wa * static_cast<double>(a[i]) + alpha * static_cast<double>(b[i]);
    mixed = std::floor(mixed + 0.5);
    if (mixed < 0.0) mixed = 0.0;
    if (mixed > 255.0) mixed = 255.0;
    out[i] = static_cast<std::uint8_t>(mixed);
  }
}

}  // namespace scalar

namespace {

struct KernelTable {
  decltype(&scalar::gemm_nn) gemm_nn;
  decltype(&scalar::gemm_nt) gemm_nt;
  decltype(&scalar::gemm_tn) gemm_tn;
  decltype(&scalar::add_row_vector) add_row_vector;
  decltype(&scalar::col_sums) col_sums;
  decltype(&scalar::relu_forward) relu_forward;
  decltype(&scalar::relu_backward) relu_backward;
  decltype(&scalar::adam_step) adam_step;
  decltype(&scalar::squared_distance) squared_distance;
  decltype(&scalar::blend_u8) blend_u8;
};

constexpr KernelTable kScalarTable = {
    &scalar::gemm_nn,    &scalar::gemm_nt,       &scalar::gemm_tn,
    &scalar::add_row_vector, &scalar::col_sums,  &scalar::relu_forward,
    &scalar::relu_backward,  &scalar::adam_step, &scalar::squared_distance,
    &scalar::blend_u8};

#if defined(QUADSYN_HAVE_AVX2)
constexpr KernelTable kAvx2Table = {
    &avx2::gemm_nn,    &avx2::gemm_nt,       &avx2::gemm_tn,
    &avx2::add_row_vector, &avx2::col_sums,  &avx2::relu_forward,
    &avx2::relu_backward,  &avx2::adam_step, &avx2::squared_distance,
    &avx2::blend_u8};
#endif

bool detect_avx2() {
#if defined(QUADSYN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

struct Dispatch {
  Isa isa;
  const KernelTable* table;

  Dispatch() {
    isa = detect_avx2() ? Isa::avx2 : Isa::scalar;
    if (const char* env = std::getenv("QUADSYN_KERNELS")) {
      const std::string want(env);
      if (want == "scalar") {
        isa = Isa::scalar;
      } else if (want == "avx2" && detect_avx2()) {
        isa = Isa::avx2;
      }
    }
    apply();
  }

  void apply() {
#if defined(QUADSYN_HAVE_AVX2)
    table = (isa == Isa::avx2) ? &kAvx2Table : &kScalarTable;
#else
    table = &kScalarTable;
#endif
  }
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

}  // namespace

Isa active_isa() { return dispatch().isa; }

bool avx2_available() { return detect_avx2(); }

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && !detect_avx2()) {
    throw std::runtime_error("avx2 kernels requested but not available on this CPU/build");
  }
  dispatch().isa = isa;
  dispatch().apply();
}

void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b, double* c) {
  dispatch().table->gemm_nn(m, n, k, a, b, c);
}
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b, double* c) {
  dispatch().table->gemm_nt(m, n, k, a, b, c);
}
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b, double* c) {
  dispatch().table->gemm_tn(m, n, k, a, b, c);
}
void add_row_vector(std::size_t rows, std::size_t cols, double* mat, const double* v) {
  dispatch().table->add_row_vector(rows, cols, mat, v);
}
void col_sums(std::size_t rows, std::size_t cols, const double* mat, double* out) {
  dispatch().table->col_sums(rows, cols, mat, out);
}
void relu_forward(std::size_t n, const double* x, double* y) {
  dispatch().table->relu_forward(n, x, y);
}
void relu_backward(std::size_t n, const double* pre, const double* dy, double* dx) {
  dispatch().table->relu_backward(n, pre, dy, dx);
}
void adam_step(std::size_t n, double* param, const double* grad, double* m, double* v,
               double lr, double beta1, double beta2, double eps, double bc1, double bc2) {
  dispatch().table->adam_step(n, param, grad, m, v, lr, beta1, beta2, eps, bc1, bc2);
}
double squared_distance(std::size_t n, const double* a, const double* b) {
  return dispatch().table->squared_distance(n, a, b);
}
void blend_u8(std::size_t n, const std::uint8_t* a, const std::uint8_t* b, double alpha, std::uint8_t* out) {
  dispatch().table->blend_u8(n, a, b, alpha, out);
}

}  // namespace quadsyn::kernels
