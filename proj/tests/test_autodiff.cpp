#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "doctest.h"
#include "op_cases.hpp"
#include "support.hpp"
#include "trigan/errors.hpp"
#include "trigan/gradcheck.hpp"
#include "trigan/ops.hpp"
#include "trigan/tape.hpp"

using namespace tgan;
using tgan::testing::op_cases;
using tgan::testing::OpCase;
using tgan::testing::random_tensor;
using tgan::testing::weighted_sum;

namespace {

double grad_of(const Tensor& t, std::size_t i = 0) { return t.grad()[i]; }

}  // namespace

TEST_CASE("op forward values match hand arithmetic") {
  CHECK(ops::sigmoid(Tensor::scalar(0.0)).item() == doctest::Approx(0.5).epsilon(1e-15));
  const Tensor a({2, 2}, {1, 2, 3, 4});
  const Tensor b({2, 1}, {1, 1});
  const Tensor c = ops::matmul(a, b);
  CHECK(c.shape() == Shape{2, 1});
  CHECK(c.at(0, 0) == 3.0);
  CHECK(c.at(1, 0) == 7.0);
  CHECK(ops::log(Tensor::scalar(1.0)).item() == 0.0);
}

TEST_CASE("backward examples") {
  SUBCASE("sigmoid slope at zero") {
    Tensor x = Tensor::scalar(0.0, true);
    Tape tape;
    TapeScope scope(tape);
    tape.backward(ops::sigmoid(x));
    CHECK(grad_of(x) == doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("product rule") {
    Tensor x = Tensor::scalar(2.0, true);
    Tensor y = Tensor::scalar(3.0, true);
    Tape tape;
    TapeScope scope(tape);
    tape.backward(ops::mul(x, y));
    CHECK(grad_of(x) == 3.0);
    CHECK(grad_of(y) == 2.0);
  }
  SUBCASE("-log sigmoid(w^T x) against central differences") {
    std::mt19937_64 rng(11);
    Tensor w = random_tensor({1, 6}, rng, -1, 1, true);
    Tensor x = random_tensor({6, 1}, rng, -1, 1, true);
    const auto report = gradient_check(
        [&] { return ops::neg(ops::log_sigmoid(ops::matmul(w, x))); }, {w, x});
    CHECK(report.max_rel_error < 1e-4);
  }
}

TEST_CASE("every primitive passes gradient_check on 100 random configurations") {
  for (const OpCase& c : op_cases()) {
    std::mt19937_64 rng(std::hash<std::string>{}(c.name));
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      auto [f, params] = c.make(rng);
      worst = std::max(worst, gradient_check(f, params).max_rel_error);
    }
    INFO("op " << std::string(c.name) << " worst relative error " << worst);
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("log_sigmoid gradient in the saturated tails") {
  for (const double x0 : {-40.0, -20.0, 20.0, 30.0}) {
    Tensor x = Tensor::scalar(x0, true);
    const auto r = gradient_check([&] { return ops::log_sigmoid(x); }, {x});
    INFO("x = " << x0);
    CHECK(r.max_rel_error < 1e-4);
  }
}

TEST_CASE("gradient_check examples") {
  std::mt19937_64 rng(5);
  SUBCASE("linear layer with squared-error output") {
    Tensor w = random_tensor({3, 2}, rng, -1, 1, true);
    Tensor b = random_tensor({1, 2}, rng, -1, 1, true);
    const Tensor x = random_tensor({7, 3}, rng);
    const Tensor t = random_tensor({7, 2}, rng);
    const auto r = gradient_check(
        [&] {
          const Tensor e = ops::sub(ops::add(ops::matmul(x, w), b), t);
          return ops::mean(ops::mul(e, e));
        },
        {w, b});
    CHECK(r.max_rel_error < 1e-4);
    CHECK(r.entries_checked == 8);
  }
  SUBCASE("constant function has exactly zero analytic gradient") {
    Tensor w = random_tensor({2, 2}, rng, -1, 1, true);
    const auto r = gradient_check([] { return Tensor::scalar(4.0); }, {w});
    for (double g : w.grad()) CHECK(g == 0.0);
    CHECK(r.max_rel_error == 0.0);
  }
  SUBCASE("non-finite output is a numeric error") {
    Tensor w = Tensor::scalar(1.0, true);
    CHECK_THROWS_AS(gradient_check(
                        [&] {
                          return ops::scale(w, std::numeric_limits<double>::infinity());
                        },
                        {w}),
                    NumericError);
  }
  SUBCASE("non-positive step is rejected") {
    Tensor w = Tensor::scalar(1.0, true);
    GradCheckOptions o;
    o.step = 0.0;
    CHECK_THROWS_AS(gradient_check([&] { return w; }, {w}, o), ContractViolation);
  }
}

TEST_CASE("backward twice without zero_grad doubles every gradient exactly") {
  std::mt19937_64 rng(3);
  Tensor w = random_tensor({4, 3}, rng, -1, 1, true);
  Tensor b = random_tensor({1, 3}, rng, -1, 1, true);
  const Tensor x = random_tensor({5, 4}, rng);
  Tape tape;
  TapeScope scope(tape);
  const Tensor h = ops::tanh(ops::add(ops::matmul(x, w), b));
  const Tensor loss = ops::mean(ops::log_sigmoid(h));
  tape.backward(loss);
  const auto once_w = std::vector<double>(w.grad().begin(), w.grad().end());
  const auto once_h = std::vector<double>(h.grad().begin(), h.grad().end());
  tape.backward(loss);
  for (std::size_t i = 0; i < once_w.size(); ++i) CHECK(w.grad()[i] == 2.0 * once_w[i]);
  for (std::size_t i = 0; i < once_h.size(); ++i) CHECK(h.grad()[i] == 2.0 * once_h[i]);
  w.zero_grad();
  for (double g : w.grad()) CHECK(g == 0.0);
}

TEST_CASE("tensor invariants") {
  const Tensor t = Tensor::filled({3, 4}, 2.5, true);
  CHECK(t.size() == 12);
  CHECK(t.grad().size() == 12);
  for (double g : t.grad()) CHECK(g == 0.0);
  const Tensor d = t.detach();
  CHECK_FALSE(d.requires_grad());
  CHECK(d.raw() != t.raw());
  CHECK_THROWS_AS(Tensor({2, 2}, {1.0, 2.0}), ContractViolation);
}

TEST_CASE("tape records in topological order and only when gradients are needed") {
  std::mt19937_64 rng(1);
  Tensor a = random_tensor({2, 2}, rng, -1, 1, true);
  const Tensor c = random_tensor({2, 2}, rng);
  Tape tape;
  {
    TapeScope scope(tape);
    ops::relu(c);  // no input needs a gradient: not recorded
    CHECK(tape.size() == 0);
    const Tensor y = ops::sum(ops::mul(ops::relu(a), c));
    CHECK(tape.size() == 3);
    {
      NoGradScope off;
      ops::relu(a);
    }
    CHECK(tape.size() == 3);
  }
  for (const auto& n : tape.nodes()) {
    CHECK(n.in0 < n.out);
    if (n.in1 >= 0) CHECK(n.in1 < n.out);
  }
  CHECK(active_tape() == nullptr);
}

TEST_CASE("numerical safety of the probability primitives") {
  const Tensor x({1, 6}, {-800, -40, -1e-3, 0, 40, 800});
  const Tensor sig = ops::sigmoid(x);
  for (double s : sig.values()) {
    CHECK(s > 0.0);
    CHECK(s < 1.0);
  }
  const Tensor logs = ops::log_sigmoid(x);
  for (double l : logs.values()) CHECK(std::isfinite(l));
  CHECK(ops::log_sigmoid(Tensor::scalar(-800.0)).item() == doctest::Approx(-800.0));
  CHECK(ops::log_sigmoid(Tensor::scalar(0.0)).item() == doctest::Approx(-std::log(2.0)));
  CHECK(ops::prob_logit_bound() == doctest::Approx(std::log((1 - 1e-7) / 1e-7)));
}

TEST_CASE("error paths") {
  const Tensor a = Tensor::zeros({2, 3});
  const Tensor b = Tensor::zeros({2, 2});
  try {
    ops::matmul(a, b);
    FAIL("matmul accepted mismatched shapes");
  } catch (const ContractViolation& e) {
    const std::string what = e.what();
    CHECK(what.find("2 x 3") != std::string::npos);
    CHECK(what.find("2 x 2") != std::string::npos);
  }
  CHECK_THROWS_AS(ops::add(a, b), ContractViolation);
  CHECK_THROWS_AS(ops::mul(a, Tensor::zeros({1, 3})), ContractViolation);
  CHECK_THROWS_AS(ops::concat_cols(a, Tensor::zeros({3, 1})), ContractViolation);
  CHECK_THROWS_AS(ops::log(Tensor::scalar(0.0)), DomainError);
  CHECK_THROWS_AS(ops::log(Tensor::scalar(-1.0)), DomainError);

  Tensor w = Tensor::filled({2, 2}, 1.0, true);
  Tape tape;
  TapeScope scope(tape);
  CHECK_THROWS_AS(tape.backward(ops::relu(w)), ContractViolation);
}

TEST_CASE("replay determinism: identical inputs give bit-identical values") {
  auto run = [] {
    std::mt19937_64 rng(77);
    const Tensor x = random_tensor({16, 4}, rng);
    const Tensor w = random_tensor({4, 3}, rng);
    const Tensor y = ops::tanh(ops::matmul(x, w));
    return std::vector<double>(y.values().begin(), y.values().end());
  };
  CHECK(run() == run());
}
