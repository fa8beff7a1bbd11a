// AVX2 variants of the dispatched kernels. Compiled with -mavx2 (deliberately
// without -mfma): every elementwise kernel and the broadcast-style GEMMs keep
// the scalar reference's operation order and therefore match it bit-for-bit.
// gemm_nt and squared_distance accumulate in four lanes and differ from the
// reference only by reassociation of the final sum.

#include "quadsyn/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <cstring>

namespace quadsyn::kernels::avx2 {

void gemm_nn(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c) {
  std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      const __m256d av = _mm256_set1_pd(aip);
      const double* brow = b + p * n;
      std::size_t j = 0;
      for (; j + 4 <= n; j += 4) {
        __m256d cv = _mm256_loadu_pd(crow + j);
        __m256d bv = _mm256_loadu_pd(brow + j);
        cv = _mm256_add_pd(cv, _mm256_mul_pd(av, bv));
        _mm256_storeu_pd(crow + j, cv);
      }
      for (; j < n; ++j) {
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
      __m256d acc = _mm256_setzero_pd();
      std::size_t p = 0;
      for (; p + 4 <= k; p += 4) {
        __m256d av = _mm256_loadu_pd(arow + p);
        __m256d bv = _mm256_loadu_pd(brow + p);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(av, bv));
      }
      alignas(32) double lanes[4];
      _mm256_store_pd(lanes, acc);
      double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
      for (; p < k; ++p) {
        sum += arow[p] * brow[p];
      }
      c[i * n + j] = sum;
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
      const __m256d av = _mm256_set1_pd(api);
      double* crow = c + i * n;
      std::size_t j = 0;
      for (; j + 4 <= n; j += 4) {
        __m256d cv = _mm256_loadu_pd(crow + j);
        __m256d bv = _mm256_loadu_pd(brow + j);
        cv = _mm256_add_pd(cv, _mm256_mul_pd(av, bv));
        _mm256_storeu_pd(crow + j, cv);
      }
      for (; j < n; ++j) {
        crow[j] += api * brow[j];
      }
    }
  }
}

void add_row_vector(std::size_t rows, std::size_t cols, double* mat, const double* v) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* row = mat + r * cols;
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) {
      __m256d rv = _mm256_loadu_pd(row + c);
      __m256d vv = _mm256_loadu_pd(v + c);
      _mm256_storeu_pd(row + c, _mm256_add_pd(rv, vv));
    }
    for (; c < cols; ++c) {
      row[c] += v[c];
    }
  }
}

void col_sums(std::size_t rows, std::size_t cols, const double* mat, double* out) {
  std::memset(out, 0, cols * sizeof(double));
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = mat + r * cols;
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) {
      __m256d ov = _mm256_loadu_pd(out + c);
      __m256d rv = _mm256_loadu_pd(row + c);
      _mm256_storeu_pd(out + c, _mm256_add_pd(ov, rv));
    }
    for (; c < cols; ++c) {
      out[c] += row[c];
    }
  }
}

void relu_forward(std::size_t n, const double* x, double* y) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d keep = _mm256_cmp_pd(xv, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(y + i, _mm256_and_pd(xv, keep));
  }
  for (; i < n; ++i) {
    y[i] = x[i] > 0.0 ? x[i] : 0.0;
  }
}

void relu_backward(std::size_t n, const double* pre, const double* dy, double* dx) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d pv = _mm256_loadu_pd(pre + i);
    __m256d dv = _mm256_loadu_pd(dy + i);
    __m256d keep = _mm256_cmp_pd(pv, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(dx + i, _mm256_and_pd(dv, keep));
  }
  for (; i < n; ++i) {
    dx[i] = pre[i] > 0.0 ? dy[i] : 0.0;
  }
}

void adam_step(std::size_t n, double* param, const double* grad, double* m, double* v,
               double lr, double beta1, double beta2, double eps, double bc1, double bc2) {
  const __m256d b1 = _mm256_set1_pd(beta1);
  const __m256d b1c = _mm256_set1_pd(1.0 - beta1);
  const __m256d b2 = _mm256_set1_pd(beta2);
  const __m256d b2c = _mm256_set1_pd(1.0 - beta2);
  const __m256d lrv = _mm256_set1_pd(lr);
  const __m256d epsv = _mm256_set1_pd(eps);
  const __m256d bc1v = _mm256_set1_pd(bc1);
  const __m256d bc2v = _mm256_set1_pd(bc2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d g = _mm256_loadu_pd(grad + i);
    __m256d mv = _mm256_loadu_pd(m + i);
    __m256d vv = _mm256_loadu_pd(v + i);
    mv = _mm256_add_pd(_mm256_mul_pd(b1, mv), _mm256_mul_pd(b1c, g));
    vv = _mm256_add_pd(_mm256_mul_pd(b2, vv), _mm256_mul_pd(b2c, _mm256_mul_pd(g, g)));
    _mm256_storeu_pd(m + i, mv);
    _mm256_storeu_pd(v + i, vv);
    const __m256d mhat = _mm256_div_pd(mv, bc1v);
    const __m256d vhat = _mm256_div_pd(vv, bc2v);
    const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), epsv);
    __m256d pv = _mm256_loadu_pd(param + i);
    pv = _mm256_sub_pd(pv, _mm256_div_pd(_mm256_mul_pd(lrv, mhat), denom));
    _mm256_storeu_pd(param + i, pv);
  }
  for (; i < n; ++i) {
    const double g = grad[i];
    m[i] = beta1 * m[i] + (1.0 - beta1) * g;
    v[i] = beta2 * v[i] + (1.0 - beta2) * (g * g);
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    param[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

double squared_distance(std::size_t n, const double* a, const double* b) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

void blend_u8(std::size_t n, const std::uint8_t* a, const std::uint8_t* b,
              double alpha, std::uint8_t* out) {
  const double wa = 1.0 - alpha;
  const __m256d wav = _mm256_set1_pd(wa);
  const __m256d wbv = _mm256_set1_pd(alpha);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d lo = _mm256_setzero_pd();
  const __m256d hi = _mm256_set1_pd(255.0);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i a32 = _mm256_cvtepu8_epi32(_mm_loadl_epi64(reinterpret_cast<const __m128i*>(a + i)));
    const __m256i b32 = _mm256_cvtepu8_epi32(_mm_loadl_epi64(reinterpret_cast<const __m128i*>(b + i)));

    auto mix4 = [&](__m128i a4, __m128i b4) -> __m128i {
      __m256d ad = _mm256_cvtepi32_pd(a4);
      __m256d bd = _mm256_cvtepi32_pd(b4);
      __m256d mixed = _mm256_add_pd(_mm256_mul_pd(wav, ad), _mm256_mul_pd(wbv, bd));
      mixed = _mm256_floor_pd(_mm256_add_pd(mixed, half));
      mixed = _mm256_min_pd(_mm256_max_pd(mixed, lo), hi);
      return _mm256_cvttpd_epi32(mixed);
    };
    const __m128i lo32 = mix4(_mm256_castsi256_si128(a32), _mm256_castsi256_si128(b32));
    const __m128i hi32 = mix4(_mm256_extracti128_si256(a32, 1), _mm256_extracti128_si256(b32, 1));
    const __m128i packed16 = _mm_packus_epi32(lo32, hi32);
    const __m128i packed8 = _mm_packus_epi16(packed16, packed16);
    _mm_storel_epi64(reinterpret_cast<__m128i*>(out + i), packed8);
  }
  for (; i < n; ++i) {
    double mixed = wa * static_cast<double>(a[i]) + alpha * static_cast<double>(b[i]);
    mixed = std::floor(mixed + 0.5);
    if (mixed < 0.0) mixed = 0.0;
    if (mixed > 255.0) mixed = 255.0;
    out[i] = static_cast<std::uint8_t>(mixed);
  }
}

}  // namespace quadsyn::kernels::avx2
