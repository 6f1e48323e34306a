#include "trigan/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trigan/errors.hpp"
#include "trigan/kernels.hpp"
#include "trigan/tape.hpp"

namespace tgan {

namespace {

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(sigmoid(x)) = -softplus(-x) = min(x, 0) - log1p(exp(-|x|))
double log_sigmoid_value(double x) { return std::min(x, 0.0) - std::log1p(std::exp(-std::abs(x))); }

[[noreturn]] void shape_error(const char* op, const Shape& a, const Shape& b) {
  throw ContractViolation(std::string(op) + ": incompatible shapes " + a.str() + " and " +
                          b.str());
}

bool any_requires_grad(const Tensor& a, const Tensor* b) {
  return a.requires_grad() || (b && b->requires_grad());
}

// Records `out` on the active tape when some input needs a gradient.
Tensor finish(OpKind kind, Tensor out, const Tensor& a, const Tensor* b = nullptr,
              double lo = 0.0, double hi = 0.0) {
  Tape* tape = active_tape();
  if (tape && any_requires_grad(a, b)) {
    out.set_requires_grad(true);
    tape->record(kind, out, a, b, lo, hi);
  }
  return out;
}

template <typename F>
Tensor unary(OpKind kind, const Tensor& a, F f, double lo = 0.0, double hi = 0.0) {
  std::vector<double> v(a.size());
  auto av = a.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(av[i]);
  return finish(kind, Tensor(a.shape(), std::move(v)), a, nullptr, lo, hi);
}

bool is_row_broadcast(const Shape& a, const Shape& b) {
  return b.rows == 1 && b.cols == a.cols && a.rows != 1;
}

template <typename F>
Tensor binary_broadcast(OpKind kind, const char* name, const Tensor& a, const Tensor& b, F f) {
  const bool bcast = is_row_broadcast(a.shape(), b.shape());
  if (!(a.shape() == b.shape()) && !bcast) shape_error(name, a.shape(), b.shape());
  std::vector<double> v(a.size());
  auto av = a.values();
  auto bv = b.values();
  const std::size_t cols = a.cols();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(av[i], bv[bcast ? i % cols : i]);
  return finish(kind, Tensor(a.shape(), std::move(v)), a, &b);
}

}  // namespace

namespace ops {

double prob_logit_bound() { return std::log((1.0 - kProbEps) / kProbEps); }

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) shape_error("matmul", a.shape(), b.shape());
  Tensor out = Tensor::zeros({a.rows(), b.cols()});
  kernels::parallel::gemm_nn(a.values(), b.values(), out.values(), a.rows(), a.cols(), b.cols());
  return finish(OpKind::matmul, std::move(out), a, &b);
}

Tensor add(const Tensor& a, const Tensor& b) {
  return binary_broadcast(OpKind::add, "add", a, b, [](double x, double y) { return x + y; });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return binary_broadcast(OpKind::sub, "sub", a, b, [](double x, double y) { return x - y; });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  if (!(a.shape() == b.shape())) shape_error("mul", a.shape(), b.shape());
  return binary_broadcast(OpKind::mul, "mul", a, b, [](double x, double y) { return x * y; });
}

Tensor neg(const Tensor& a) {
  return unary(OpKind::neg, a, [](double x) { return -x; });
}

Tensor scale(const Tensor& a, double factor) {
  return unary(OpKind::scale, a, [factor](double x) { return factor * x; }, factor);
}

Tensor relu(const Tensor& a) {
  return unary(OpKind::relu, a, [](double x) { return x > 0.0 ? x : 0.0; });
}

Tensor leaky_relu(const Tensor& a, double slope) {
  return unary(OpKind::leaky_relu, a, [slope](double x) { return x > 0.0 ? x : slope * x; },
               slope);
}

Tensor tanh(const Tensor& a) {
  return unary(OpKind::tanh, a, [](double x) { return std::tanh(x); });
}

Tensor sigmoid(const Tensor& a) {
  return unary(OpKind::sigmoid, a, [](double x) {
    return std::clamp(stable_sigmoid(x), kProbEps, 1.0 - kProbEps);
  });
}

Tensor log(const Tensor& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a.values()[i] > 0.0))
      throw DomainError("log: non-positive argument " + std::to_string(a.values()[i]) +
                        " at index " + std::to_string(i));
  return unary(OpKind::log, a, [](double x) { return std::log(x); });
}

Tensor log_sigmoid(const Tensor& a) {
  return unary(OpKind::log_sigmoid, a, log_sigmoid_value);
}

Tensor clamp(const Tensor& a, double lo, double hi) {
  require(lo < hi, "clamp: empty interval");
  return unary(OpKind::clamp, a, [lo, hi](double x) { return std::clamp(x, lo, hi); }, lo, hi);
}

Tensor mean_rows(const Tensor& a) {
  require(a.rows() > 0, "mean_rows: empty tensor");
  std::vector<double> v(a.cols(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) v[c] += a.at(r, c);
  for (double& x : v) x /= static_cast<double>(a.rows());
  return finish(OpKind::mean_rows, Tensor({1, a.cols()}, std::move(v)), a);
}

Tensor sum(const Tensor& a) {
  double s = 0.0;
  for (double x : a.values()) s += x;
  return finish(OpKind::sum, Tensor::scalar(s), a);
}

Tensor mean(const Tensor& a) {
  require(a.size() > 0, "mean: empty tensor");
  return scale(sum(a), 1.0 / static_cast<double>(a.size()));
}

Tensor concat_cols(const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows()) shape_error("concat_cols", a.shape(), b.shape());
  const std::size_t ca = a.cols(), cb = b.cols(), w = ca + cb;
  std::vector<double> v(a.rows() * w);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::copy_n(a.values().begin() + r * ca, ca, v.begin() + r * w);
    std::copy_n(b.values().begin() + r * cb, cb, v.begin() + r * w + ca);
  }
  return finish(OpKind::concat_cols, Tensor({a.rows(), w}, std::move(v)), a, &b);
}

}  // namespace ops

// ---------------------------------------------------------------------------
// Reverse sweep

void Tape::backward(const Tensor& loss) {
  require(loss.size() == 1, "backward: loss must be scalar, got " + loss.shape().str());
  TensorData* ld = loss.raw();
  if (ld->tape_serial != serial_ || ld->var < 0) {
    // Not produced on this tape: only the leaf itself is reachable.
    if (loss.requires_grad()) ld->grad[0] += 1.0;
    return;
  }

  std::vector<std::vector<double>> adj(vars_.size());
  auto adj_of = [&](int var) -> std::vector<double>& {
    auto& g = adj[var];
    if (g.empty()) g.assign(vars_[var]->value.size(), 0.0);
    return g;
  };
  adj_of(ld->var)[0] = 1.0;

  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    const Node& n = *it;
    if (adj[n.out].empty()) continue;
    const std::vector<double>& g = adj[n.out];
    const TensorData& A = *vars_[n.in0];
    const TensorData& Y = *vars_[n.out];
    const bool da = needs_grad(n.in0);
    const bool db = n.in1 >= 0 && needs_grad(n.in1);
    const std::size_t len = g.size();

    switch (n.kind) {
      case OpKind::matmul: {
        const TensorData& B = *vars_[n.in1];
        const std::size_t m = A.shape.rows, k = A.shape.cols, cols = B.shape.cols;
        if (da) kernels::parallel::gemm_nt(g, B.value, adj_of(n.in0), m, cols, k);
        if (db) kernels::parallel::gemm_tn(A.value, g, adj_of(n.in1), k, m, cols);
        break;
      }
      case OpKind::add:
      case OpKind::sub: {
        const double sign = n.kind == OpKind::add ? 1.0 : -1.0;
        if (da) {
          auto& ga = adj_of(n.in0);
          for (std::size_t i = 0; i < len; ++i) ga[i] += g[i];
        }
        if (db) {
          auto& gb = adj_of(n.in1);
          const std::size_t bl = gb.size();
          for (std::size_t r0 = 0; r0 < len; r0 += bl)
            for (std::size_t c = 0; c < bl; ++c) gb[c] += sign * g[r0 + c];
        }
        break;
      }
      case OpKind::mul: {
        const TensorData& B = *vars_[n.in1];
        if (da) {
          auto& ga = adj_of(n.in0);
          for (std::size_t i = 0; i < len; ++i) ga[i] += g[i] * B.value[i];
        }
        if (db) {
          auto& gb = adj_of(n.in1);
          for (std::size_t i = 0; i < len; ++i) gb[i] += g[i] * A.value[i];
        }
        break;
      }
      case OpKind::concat_cols: {
        const TensorData& B = *vars_[n.in1];
        const std::size_t ca = A.shape.cols, cb = B.shape.cols, w = ca + cb;
        for (std::size_t r = 0; r < A.shape.rows; ++r) {
          if (da) {
            auto& ga = adj_of(n.in0);
            for (std::size_t c = 0; c < ca; ++c) ga[r * ca + c] += g[r * w + c];
          }
          if (db) {
            auto& gb = adj_of(n.in1);
            for (std::size_t c = 0; c < cb; ++c) gb[r * cb + c] += g[r * w + ca + c];
          }
        }
        break;
      }
      case OpKind::mean_rows: {
        if (!da) break;
        auto& ga = adj_of(n.in0);
        const std::size_t rows = A.shape.rows, cols = A.shape.cols;
        const double inv = 1.0 / static_cast<double>(rows);
        for (std::size_t r = 0; r < rows; ++r)
          for (std::size_t c = 0; c < cols; ++c) ga[r * cols + c] += g[c] * inv;
        break;
      }
      case OpKind::sum: {
        if (!da) break;
        auto& ga = adj_of(n.in0);
        for (double& x : ga) x += g[0];
        break;
      }
      default: {
        // Elementwise unary ops.
        if (!da) break;
        auto& ga = adj_of(n.in0);
        const auto& x = A.value;
        const auto& y = Y.value;
        switch (n.kind) {
          case OpKind::neg:
            for (std::size_t i = 0; i < len; ++i) ga[i] -= g[i];
            break;
          case OpKind::scale:
            for (std::size_t i = 0; i < len; ++i) ga[i] += n.lo * g[i];
            break;
          case OpKind::relu:
            for (std::size_t i = 0; i < len; ++i) ga[i] += x[i] > 0.0 ? g[i] : 0.0;
            break;
          case OpKind::leaky_relu:
            for (std::size_t i = 0; i < len; ++i) ga[i] += x[i] > 0.0 ? g[i] : n.lo * g[i];
            break;
          case OpKind::tanh:
            for (std::size_t i = 0; i < len; ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
            break;
          case OpKind::sigmoid:
            for (std::size_t i = 0; i < len; ++i) {
              const double s = stable_sigmoid(x[i]);
              ga[i] += g[i] * s * (1.0 - s);
            }
            break;
          case OpKind::log:
            for (std::size_t i = 0; i < len; ++i) ga[i] += g[i] / x[i];
            break;
          case OpKind::log_sigmoid:
            for (std::size_t i = 0; i < len; ++i) ga[i] += g[i] * stable_sigmoid(-x[i]);
            break;
          case OpKind::clamp:
            for (std::size_t i = 0; i < len; ++i)
              ga[i] += (x[i] > n.lo && x[i] < n.hi) ? g[i] : 0.0;
            break;
          default:
            break;
        }
      }
    }
  }

  for (std::size_t v = 0; v < vars_.size(); ++v) {
    if (adj[v].empty() || !needs_grad(static_cast<int>(v))) continue;
    auto& acc = vars_[v]->grad;
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += adj[v][i];
  }
}

}  // namespace tgan
