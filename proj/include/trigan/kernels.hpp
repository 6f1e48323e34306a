#pragma once

// Dense data-parallel kernels. Every kernel exists twice: a plain serial
// reference in `serial::` used by the tests as ground truth, and a blocked
// OpenMP version in `parallel::` that the rest of the library calls.
//
// Matrices are row-major. All gemm variants accumulate: C += op(A) * op(B).

#include <cstddef>
#include <span>

namespace tgan::kernels {

struct RbfSums {
  double aa = 0.0;  // sum over a x a
  double bb = 0.0;  // sum over b x b
  double ab = 0.0;  // sum over a x b
};

namespace serial {

// C[m x n] += A[m x k] * B[k x n]
void gemm_nn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t m, std::size_t k, std::size_t n);
// C[m x n] += A[m x k] * B[n x k]^T
void gemm_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t m, std::size_t k, std::size_t n);
// C[m x n] += A[k x m]^T * B[k x n]
void gemm_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t m, std::size_t k, std::size_t n);

// Sums of exp(-|u-v|^2 * inv_two_h2) over the three point-set pairings.
// Points are rows of width `dim`.
RbfSums rbf_sums(std::span<const double> a, std::span<const double> b, std::size_t dim,
                 double inv_two_h2);

}  // namespace serial

namespace parallel {

void gemm_nn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t m, std::size_t k, std::size_t n);
void gemm_nt(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t m, std::size_t k, std::size_t n);
void gemm_tn(std::span<const double> a, std::span<const double> b, std::span<double> c,
             std::size_t m, std::size_t k, std::size_t n);

RbfSums rbf_sums(std::span<const double> a, std::span<const double> b, std::size_t dim,
                 double inv_two_h2);

}  // namespace parallel

}  // namespace tgan::kernels
