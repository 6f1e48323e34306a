#include "trigan/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace tgan::kernels {

namespace serial {

void gemm_nn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += a[i * k + p] * b[p * n + j];
      c[i * n + j] += s;
    }
}

void gemm_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += a[i * k + p] * b[j * k + p];
      c[i * n + j] += s;
    }
}

void gemm_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += a[p * m + i] * b[p * n + j];
      c[i * n + j] += s;
    }
}

RbfSums rbf_sums(std::span<const double> a, std::span<const double> b, std::size_t dim,
                 double inv_two_h2) {
  auto block = [&](std::span<const double> u, std::span<const double> v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size() / dim; ++i)
      for (std::size_t j = 0; j < v.size() / dim; ++j) {
        double d2 = 0.0;
        for (std::size_t t = 0; t < dim; ++t) {
          const double d = u[i * dim + t] - v[j * dim + t];
          d2 += d * d;
        }
        s += std::exp(-d2 * inv_two_h2);
      }
    return s;
  };
  return {block(a, a), block(b, b), block(a, b)};
}

}  // namespace serial

namespace parallel {

namespace {

constexpr std::size_t kRowBlock = 8;
constexpr std::size_t kColBlock = 24;
constexpr std::size_t kDepthBlock = 256;

// One kRowBlock x kColBlock tile of C over a kc-deep slice. Element (r, p) of
// the A block is a[r * rs + p * ps], which covers both A and its transpose.
// `panel` is the packed B slice (kc rows of kColBlock, zero padded). Fixed
// trip counts keep `acc` in vector registers.
inline void tile_full(const double* a, std::size_t rs, std::size_t ps, const double* panel,
                      std::size_t kc, double* c, std::size_t ldc, std::size_t nr) {
  double acc[kRowBlock][kColBlock] = {};
  for (std::size_t p = 0; p < kc; ++p) {
    const double* brow = panel + p * kColBlock;
    for (std::size_t r = 0; r < kRowBlock; ++r) {
      const double av = a[r * rs + p * ps];
#pragma omp simd
      for (std::size_t jj = 0; jj < kColBlock; ++jj) acc[r][jj] += av * brow[jj];
    }
  }
  for (std::size_t r = 0; r < kRowBlock; ++r)
    for (std::size_t jj = 0; jj < nr; ++jj) c[r * ldc + jj] += acc[r][jj];
}

inline void tile_edge(const double* a, std::size_t rs, std::size_t ps, const double* panel,
                      std::size_t kc, double* c, std::size_t ldc, std::size_t mr,
                      std::size_t nr) {
  double acc[kRowBlock][kColBlock] = {};
  for (std::size_t p = 0; p < kc; ++p) {
    const double* brow = panel + p * kColBlock;
    for (std::size_t r = 0; r < mr; ++r) {
      const double av = a[r * rs + p * ps];
#pragma omp simd
      for (std::size_t jj = 0; jj < kColBlock; ++jj) acc[r][jj] += av * brow[jj];
    }
  }
  for (std::size_t r = 0; r < mr; ++r)
    for (std::size_t jj = 0; jj < nr; ++jj) c[r * ldc + jj] += acc[r][jj];
}

// C (m x n) += op(A) op(B) where op(A) is m x k and op(B) is k x n. Transposed
// operands are read in place: A^T through the tile strides, B^T while packing.
template <bool TransA, bool TransB>
void gemm_packed(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
                 std::size_t n) {
  if (m == 0 || n == 0 || k == 0) return;
  const std::size_t rs = TransA ? 1 : k;  // step between rows of op(A)
  const std::size_t ps = TransA ? m : 1;  // step along the depth of op(A)
  const std::ptrdiff_t panels = static_cast<std::ptrdiff_t>((n + kColBlock - 1) / kColBlock);
  // Each thread owns whole column panels of C, so no two threads write the
  // same output element.
#pragma omp parallel
  {
    std::vector<double> panel(kDepthBlock * kColBlock);
#pragma omp for schedule(static)
    for (std::ptrdiff_t jb = 0; jb < panels; ++jb) {
      const std::size_t j0 = static_cast<std::size_t>(jb) * kColBlock;
      const std::size_t nr = std::min(kColBlock, n - j0);
      for (std::size_t p0 = 0; p0 < k; p0 += kDepthBlock) {
        const std::size_t kc = std::min(kDepthBlock, k - p0);
        if constexpr (TransB) {
          std::fill(panel.begin(), panel.end(), 0.0);
          for (std::size_t jj = 0; jj < nr; ++jj) {
            const double* src = b + (j0 + jj) * k + p0;
            for (std::size_t p = 0; p < kc; ++p) panel[p * kColBlock + jj] = src[p];
          }
        } else {
          for (std::size_t p = 0; p < kc; ++p) {
            const double* src = b + (p0 + p) * n + j0;
            double* dst = panel.data() + p * kColBlock;
            std::size_t jj = 0;
            for (; jj < nr; ++jj) dst[jj] = src[jj];
            for (; jj < kColBlock; ++jj) dst[jj] = 0.0;
          }
        }
        std::size_t i0 = 0;
        for (; i0 + kRowBlock <= m; i0 += kRowBlock)
          tile_full(a + i0 * rs + p0 * ps, rs, ps, panel.data(), kc, c + i0 * n + j0, n, nr);
        if (i0 < m)
          tile_edge(a + i0 * rs + p0 * ps, rs, ps, panel.data(), kc, c + i0 * n + j0, n, m - i0,
                    nr);
      }
    }
  }
}

}  // namespace

void gemm_nn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t m, std::size_t k, std::size_t n) {
  gemm_packed<false, false>(a.data(), b.data(), c.data(), m, k, n);
}

void gemm_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t m, std::size_t k, std::size_t n) {
  gemm_packed<false, true>(a.data(), b.data(), c.data(), m, k, n);
}

void gemm_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t m, std::size_t k, std::size_t n) {
  gemm_packed<true, false>(a.data(), b.data(), c.data(), m, k, n);
}

RbfSums rbf_sums(std::span<const double> a, std::span<const double> b, std::size_t dim,
                 double inv_two_h2) {
  auto block = [&](std::span<const double> u, std::span<const double> v) {
    const std::ptrdiff_t nu = static_cast<std::ptrdiff_t>(u.size() / dim);
    const std::size_t nv = v.size() / dim;
    double total = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : total)
    for (std::ptrdiff_t i = 0; i < nu; ++i) {
      const double* ui = u.data() + i * dim;
      double row = 0.0;
#pragma omp simd reduction(+ : row)
      for (std::size_t j = 0; j < nv; ++j) {
        double d2 = 0.0;
        for (std::size_t t = 0; t < dim; ++t) {
          const double d = ui[t] - v[j * dim + t];
          d2 += d * d;
        }
        row += std::exp(-d2 * inv_two_h2);
      }
      total += row;
    }
    return total;
  };
  return {block(a, a), block(b, b), block(a, b)};
}

}  // namespace parallel

}  // namespace tgan::kernels
