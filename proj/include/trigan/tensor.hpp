#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace tgan {

class Tape;

// Row-major 2D shape. Every tensor in this library is a matrix; a scalar is
// 1 x 1 and a bias row is 1 x n.
struct Shape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const { return rows * cols; }
  bool operator==(const Shape&) const = default;
  std::string str() const;
};

struct TensorData {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;
  bool requires_grad = false;

  // Registration on the tape that last recorded this tensor.
  std::uint64_t tape_serial = 0;
  int var = -1;
};

// Shared handle to a dense matrix plus its gradient accumulator. Copying a
// Tensor aliases the same storage; use clone() for an independent copy.
class Tensor {
 public:
  Tensor() = default;
  Tensor(Shape shape, std::vector<double> values, bool requires_grad = false);

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor filled(Shape shape, double v, bool requires_grad = false);
  static Tensor scalar(double v, bool requires_grad = false);

  bool defined() const { return data_ != nullptr; }
  const Shape& shape() const { return data_->shape; }
  std::size_t rows() const { return data_->shape.rows; }
  std::size_t cols() const { return data_->shape.cols; }
  std::size_t size() const { return data_->value.size(); }

  std::span<double> values() { return data_->value; }
  std::span<const double> values() const { return data_->value; }
  std::span<double> grad() { return data_->grad; }
  std::span<const double> grad() const { return data_->grad; }

  double at(std::size_t r, std::size_t c) const { return data_->value[r * cols() + c]; }
  double item() const;

  bool requires_grad() const { return data_->requires_grad; }
  void set_requires_grad(bool on) { data_->requires_grad = on; }
  void zero_grad();

  // New leaf holding a copy of the values; gradients do not flow back.
  Tensor detach() const;
  Tensor clone() const;

  TensorData* raw() const { return data_.get(); }
  const std::shared_ptr<TensorData>& handle() const { return data_; }
  explicit Tensor(std::shared_ptr<TensorData> d) : data_(std::move(d)) {}

 private:
  std::shared_ptr<TensorData> data_;
};

}  // namespace tgan
