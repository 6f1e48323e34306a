#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "trigan/tensor.hpp"

namespace tgan {

enum class OpKind {
  matmul,
  add,
  sub,
  mul,
  neg,
  scale,
  relu,
  leaky_relu,
  tanh,
  sigmoid,
  log,
  log_sigmoid,
  clamp,
  mean_rows,
  sum,
  concat_cols,
};

const char* op_name(OpKind kind);

// Linear record of the operations executed while the tape is active. Nodes
// are appended in execution order, so inputs always precede their consumers.
// A tape and the tensors it references belong to one thread.
class Tape {
 public:
  struct Node {
    OpKind kind;
    int in0 = -1;
    int in1 = -1;
    int out = -1;
    double lo = 0.0;  // slope, scale factor or clamp bounds
    double hi = 0.0;
  };

  Tape();
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Registers `t` on this tape (idempotent) and returns its var id.
  int var_of(const Tensor& t);
  void record(OpKind kind, const Tensor& out, const Tensor& a, const Tensor* b = nullptr,
              double lo = 0.0, double hi = 0.0);

  // Accumulates d(loss)/d(t) into t.grad() for every tensor reachable from
  // `loss`. Leaves with requires_grad == false are skipped.
  void backward(const Tensor& loss);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::uint64_t serial() const { return serial_; }

 private:
  bool needs_grad(int var) const;

  std::uint64_t serial_;
  std::vector<std::shared_ptr<TensorData>> vars_;
  std::vector<int> producer_;
  std::vector<Node> nodes_;
};

// Makes `tape` the recording target for ops on this thread until destroyed.
class TapeScope {
 public:
  explicit TapeScope(Tape& tape);
  ~TapeScope();
  TapeScope(const TapeScope&) = delete;
  TapeScope& operator=(const TapeScope&) = delete;

 private:
  Tape* previous_;
};

// Suspends recording on this thread (evaluation-only code paths).
class NoGradScope {
 public:
  NoGradScope();
  ~NoGradScope();
  NoGradScope(const NoGradScope&) = delete;
  NoGradScope& operator=(const NoGradScope&) = delete;

 private:
  Tape* previous_;
};

Tape* active_tape();

}  // namespace tgan
