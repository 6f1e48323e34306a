#include "trigan/tensor.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

#include "trigan/errors.hpp"
#include "trigan/tape.hpp"

namespace tgan {

std::string Shape::str() const {
  std::ostringstream os;
  os << "(" << rows << " x " << cols << ")";
  return os.str();
}

Tensor::Tensor(Shape shape, std::vector<double> values, bool requires_grad)
    : data_(std::make_shared<TensorData>()) {
  require(shape.size() == values.size(), "tensor of shape " + shape.str() + " given " +
                                             std::to_string(values.size()) + " values");
  data_->shape = shape;
  data_->value = std::move(values);
  data_->grad.assign(data_->value.size(), 0.0);
  data_->requires_grad = requires_grad;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
  return Tensor(shape, std::vector<double>(shape.size(), 0.0), requires_grad);
}

Tensor Tensor::filled(Shape shape, double v, bool requires_grad) {
  return Tensor(shape, std::vector<double>(shape.size(), v), requires_grad);
}

Tensor Tensor::scalar(double v, bool requires_grad) {
  return Tensor({1, 1}, {v}, requires_grad);
}

double Tensor::item() const {
  require(size() == 1, "item() on tensor of shape " + shape().str());
  return data_->value[0];
}

void Tensor::zero_grad() { std::fill(data_->grad.begin(), data_->grad.end(), 0.0); }

Tensor Tensor::detach() const { return Tensor(shape(), data_->value, false); }

Tensor Tensor::clone() const {
  Tensor t(shape(), data_->value, data_->requires_grad);
  std::copy(data_->grad.begin(), data_->grad.end(), t.data_->grad.begin());
  return t;
}

// ---------------------------------------------------------------------------
// Tape

namespace {

std::atomic<std::uint64_t> g_tape_serial{1};
thread_local Tape* t_active = nullptr;

}  // namespace

const char* op_name(OpKind kind) {
  switch (kind) {
    case OpKind::matmul: return "matmul";
    case OpKind::add: return "add";
    case OpKind::sub: return "sub";
    case OpKind::mul: return "mul";
    case OpKind::neg: return "neg";
    case OpKind::scale: return "scale";
    case OpKind::relu: return "relu";
    case OpKind::leaky_relu: return "leaky_relu";
    case OpKind::tanh: return "tanh";
    case OpKind::sigmoid: return "sigmoid";
    case OpKind::log: return "log";
    case OpKind::log_sigmoid: return "log_sigmoid";
    case OpKind::clamp: return "clamp";
    case OpKind::mean_rows: return "mean_rows";
    case OpKind::sum: return "sum";
    case OpKind::concat_cols: return "concat_cols";
  }
  return "?";
}

Tape::Tape() : serial_(g_tape_serial.fetch_add(1)) {}

int Tape::var_of(const Tensor& t) {
  TensorData* d = t.raw();
  if (d->tape_serial == serial_ && d->var >= 0) return d->var;
  d->tape_serial = serial_;
  d->var = static_cast<int>(vars_.size());
  vars_.push_back(t.handle());
  producer_.push_back(-1);
  return d->var;
}

void Tape::record(OpKind kind, const Tensor& out, const Tensor& a, const Tensor* b, double lo,
                  double hi) {
  Node node{kind, var_of(a), b ? var_of(*b) : -1, -1, lo, hi};
  node.out = var_of(out);
  producer_[node.out] = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
}

bool Tape::needs_grad(int var) const {
  return var >= 0 && (producer_[var] >= 0 || vars_[var]->requires_grad);
}

TapeScope::TapeScope(Tape& tape) : previous_(t_active) { t_active = &tape; }
TapeScope::~TapeScope() { t_active = previous_; }

NoGradScope::NoGradScope() : previous_(t_active) { t_active = nullptr; }
NoGradScope::~NoGradScope() { t_active = previous_; }

Tape* active_tape() { return t_active; }

}  // namespace tgan
