#include "doctest.h"

#include <cmath>
#include <functional>
#include <vector>

#include "pointgen/autodiff.hpp"
#include "pointgen/error.hpp"
#include "pointgen/rng.hpp"

using namespace pointgen;
using namespace pointgen::nn;

namespace {

Tensor random_tensor(std::vector<int> shape, Rng& rng, double scale = 1.0) {
  Tensor t(std::move(shape));
  for (std::int64_t i = 0; i < t.size(); ++i) t[i] = rng.normal() * scale;
  return t;
}

// Central finite differences of a scalar graph output w.r.t. one leaf tensor.
// rebuild() must construct a fresh tape over the (possibly mutated) tensors.
void check_gradient(Tensor& param, const std::function<double()>& eval,
                    const Tensor& analytic, double eps = 1e-6,
                    double tol = 1e-6) {
  for (std::int64_t i = 0; i < param.size(); ++i) {
    const double keep = param[i];
    param[i] = keep + eps;
    const double up = eval();
    param[i] = keep - eps;
    const double down = eval();
    param[i] = keep;
    const double fd = (up - down) / (2.0 * eps);
    CHECK(std::abs(fd - analytic[i]) <
          tol * std::max({1.0, std::abs(fd), std::abs(analytic[i])}));
  }
}

}  // namespace

TEST_CASE("linear gradients match finite differences") {
  Rng rng(1);
  Tensor x = random_tensor({3, 4}, rng);
  Tensor w = random_tensor({5, 4}, rng);
  Tensor b = random_tensor({5}, rng);

  auto run = [&](bool backward, Tensor* dx, Tensor* dw, Tensor* db) {
    Tape tape;
    Node* nx = tape.leaf(x, "x");
    Node* nw = tape.leaf(w, "w");
    Node* nb = tape.leaf(b, "b");
    Node* y = tape.linear(nx, nw, nb);
    Node* act = tape.relu(y);
    // Reduce to scalar with a fixed weighting so the gradient is nontrivial.
    Node* flat = tape.reshape(act, {1, 15});
    Tensor rw({1, 15});
    for (int i = 0; i < 15; ++i) rw[i] = 0.1 * (i + 1);
    Node* loss = tape.linear(flat, tape.constant(rw.reshaped({1, 15})), nullptr);
    if (backward) {
      tape.backward(loss);
      if (dx) *dx = nx->grad;
      if (dw) *dw = nw->grad;
      if (db) *db = nb->grad;
    }
    return loss->value[0];
  };

  Tensor dx, dw, db;
  run(true, &dx, &dw, &db);
  auto eval = [&]() { return run(false, nullptr, nullptr, nullptr); };
  check_gradient(x, eval, dx);
  check_gradient(w, eval, dw);
  check_gradient(b, eval, db);
}

TEST_CASE("conv2d and deconv2d gradients match finite differences") {
  Rng rng(2);
  Tensor x = random_tensor({2, 6, 6}, rng);
  Tensor wc = random_tensor({3, 2, 3, 3}, rng, 0.5);
  Tensor bc = random_tensor({3}, rng, 0.1);
  Tensor wd = random_tensor({2, 3, 5, 5}, rng, 0.3);
  Tensor bd = random_tensor({2}, rng, 0.1);

  auto run = [&](bool backward, Tensor* dwc, Tensor* dwd, Tensor* dx) {
    Tape tape;
    Node* nx = tape.leaf(x, "x");
    Node* nwc = tape.leaf(wc, "wc");
    Node* nbc = tape.leaf(bc, "bc");
    Node* nwd = tape.leaf(wd, "wd");
    Node* nbd = tape.leaf(bd, "bd");
    Node* c = tape.relu(tape.conv2d(nx, nwc, nbc, 2, 1));   // (3,3,3)
    Node* d = tape.relu(tape.deconv2d(c, nwd, nbd, 2, 2));  // (2,6,6)
    Node* flat = tape.reshape(d, {1, 72});
    Tensor rw({1, 72});
    for (int i = 0; i < 72; ++i) rw[i] = 0.05 * ((i % 7) + 1);
    Node* loss = tape.linear(flat, tape.constant(rw), nullptr);
    if (backward) {
      tape.backward(loss);
      if (dwc) *dwc = nwc->grad;
      if (dwd) *dwd = nwd->grad;
      if (dx) *dx = nx->grad;
    }
    return loss->value[0];
  };

  Tensor dwc, dwd, dx;
  run(true, &dwc, &dwd, &dx);
  auto eval = [&]() { return run(false, nullptr, nullptr, nullptr); };
  check_gradient(wc, eval, dwc, 1e-6, 1e-5);
  check_gradient(wd, eval, dwd, 1e-6, 1e-5);
  check_gradient(x, eval, dx, 1e-6, 1e-5);
}

TEST_CASE("deconv2d doubles spatial size") {
  Rng rng(3);
  Tensor x = random_tensor({4, 8, 8}, rng);
  Tensor w = random_tensor({6, 4, 5, 5}, rng);
  Tape tape;
  Node* y = tape.deconv2d(tape.constant(x), tape.constant(w), nullptr, 2, 2);
  CHECK(y->value.shape() == std::vector<int>{6, 16, 16});
}

TEST_CASE("gather and masked max gradients") {
  Rng rng(4);
  Tensor x = random_tensor({6, 3}, rng);

  auto run = [&](bool backward, Tensor* dx) {
    Tape tape;
    Node* nx = tape.leaf(x, "x");
    Node* g = tape.gather_rows(nx, {0, 2, 4, 2});
    Node* blocks = tape.reshape(g, {2, 2, 3});
    Tensor mask({2, 2});
    mask.fill(1.0);
    mask.at2(1, 1) = 0.0;  // one padded row
    Node* pooled = tape.masked_rowmax(blocks, mask);  // (2,3)
    Node* flat = tape.reshape(pooled, {1, 6});
    Tensor rw({1, 6});
    for (int i = 0; i < 6; ++i) rw[i] = 0.3 + 0.2 * i;
    Node* loss = tape.linear(flat, tape.constant(rw), nullptr);
    if (backward) {
      tape.backward(loss);
      if (dx) *dx = nx->grad;
    }
    return loss->value[0];
  };

  Tensor dx;
  run(true, &dx);
  auto eval = [&]() { return run(false, nullptr); };
  check_gradient(x, eval, dx);
}

TEST_CASE("masked rows never receive gradient") {
  Rng rng(5);
  Tensor x = random_tensor({1, 3, 2}, rng);
  // Give the masked row the largest values so unmasked pooling would pick it.
  x.at3(0, 2, 0) = 100.0;
  x.at3(0, 2, 1) = 100.0;
  Tape tape;
  Node* nx = tape.leaf(x, "x");
  Tensor mask({1, 3});
  mask.at2(0, 0) = 1.0;
  mask.at2(0, 1) = 1.0;
  mask.at2(0, 2) = 0.0;
  Node* pooled = tape.masked_rowmax(nx, mask);
  Node* flat = tape.reshape(pooled, {1, 2});
  Tensor rw({1, 2});
  rw[0] = 1.0;
  rw[1] = 1.0;
  Node* loss = tape.linear(flat, tape.constant(rw), nullptr);
  tape.backward(loss);
  CHECK(pooled->value.at2(0, 0) < 100.0);
  CHECK(nx->grad.at3(0, 2, 0) == 0.0);
  CHECK(nx->grad.at3(0, 2, 1) == 0.0);
}

TEST_CASE("chamfer node value and gradient") {
  PointCloud gt;
  gt.points = {{1, 0, 0}, {0, 1, 0}};
  Tensor pred({1, 3});
  pred[0] = 0.0;
  pred[1] = 0.0;
  pred[2] = 0.0;

  auto run = [&](bool backward, Tensor* dp) {
    Tape tape;
    Node* np = tape.leaf(pred, "pred");
    Node* loss = tape.chamfer_sq(np, gt);
    if (backward) {
      tape.backward(loss);
      if (dp) *dp = np->grad;
    }
    return loss->value[0];
  };

  // min dist pred->gt is 1 (ties to index 0); both gt points map to pred.
  CHECK(run(false, nullptr) == doctest::Approx(3.0));
  Tensor dp;
  run(true, &dp);
  // d/dp of: |p-(1,0,0)|^2 (nearest, tie->lowest) + |p-(1,0,0)|^2 + |p-(0,1,0)|^2
  CHECK(dp[0] == doctest::Approx(2.0 * (0 - 1) * 2 + 0.0));
  CHECK(dp[1] == doctest::Approx(2.0 * (0 - 1)));
}

TEST_CASE("chamfer gradient matches finite differences on a 16-point pair") {
  Rng rng(6);
  PointCloud gt;
  for (int i = 0; i < 16; ++i)
    gt.points.push_back({rng.uniform01(), rng.uniform01(), rng.uniform01()});
  Tensor pred = random_tensor({16, 3}, rng, 0.3);

  auto run = [&](bool backward, Tensor* dp) {
    Tape tape;
    Node* np = tape.leaf(pred, "pred");
    Node* loss = tape.chamfer_sq(np, gt);
    if (backward) {
      tape.backward(loss);
      if (dp) *dp = np->grad;
    }
    return loss->value[0];
  };

  Tensor dp;
  run(true, &dp);
  auto eval = [&]() { return run(false, nullptr); };
  // 1e-4 relative tolerance with nearest assignments held by small eps.
  for (std::int64_t i = 0; i < pred.size(); ++i) {
    const double keep = pred[i];
    const double eps = 1e-5;
    pred[i] = keep + eps;
    const double up = eval();
    pred[i] = keep - eps;
    const double down = eval();
    pred[i] = keep;
    const double fd = (up - down) / (2 * eps);
    CHECK(std::abs(fd - dp[i]) < 1e-4 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("softmax cross entropy gradient") {
  Rng rng(7);
  Tensor logits = random_tensor({5}, rng);

  auto run = [&](bool backward, Tensor* dl) {
    Tape tape;
    Node* nl = tape.leaf(logits, "logits");
    Node* loss = tape.softmax_cross_entropy(nl, 2);
    if (backward) {
      tape.backward(loss);
      if (dl) *dl = nl->grad;
    }
    return loss->value[0];
  };

  Tensor dl;
  const double v = run(true, &dl);
  CHECK(v > 0.0);
  auto eval = [&]() { return run(false, nullptr); };
  check_gradient(logits, eval, dl);
  // Probabilities minus one-hot sum to zero.
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += dl[i];
  CHECK(std::abs(s) < 1e-12);
}

TEST_CASE("concat splits gradient correctly") {
  Rng rng(8);
  Tensor a = random_tensor({2, 3}, rng);
  Tensor b = random_tensor({2, 2}, rng);

  auto run = [&](bool backward, Tensor* da, Tensor* db) {
    Tape tape;
    Node* na = tape.leaf(a, "a");
    Node* nb = tape.leaf(b, "b");
    Node* c = tape.concat({na, nb}, 1);  // (2,5)
    Node* flat = tape.reshape(c, {1, 10});
    Tensor rw({1, 10});
    for (int i = 0; i < 10; ++i) rw[i] = 0.1 * (i + 1);
    Node* loss = tape.linear(flat, tape.constant(rw), nullptr);
    if (backward) {
      tape.backward(loss);
      if (da) *da = na->grad;
      if (db) *db = nb->grad;
    }
    return loss->value[0];
  };

  Tensor da, db;
  run(true, &da, &db);
  auto eval = [&]() { return run(false, nullptr, nullptr); };
  check_gradient(a, eval, da);
  check_gradient(b, eval, db);
}

TEST_CASE("concat along channel axis of feature maps") {
  Rng rng(9);
  Tensor a = random_tensor({2, 4, 4}, rng);
  Tensor b = random_tensor({3, 4, 4}, rng);
  Tape tape;
  Node* c = tape.concat({tape.constant(a), tape.constant(b)}, 0);
  REQUIRE(c->value.shape() == std::vector<int>{5, 4, 4});
  CHECK(c->value.at3(0, 1, 2) == a.at3(0, 1, 2));
  CHECK(c->value.at3(2, 3, 3) == b.at3(0, 3, 3));
}

TEST_CASE("backward rejects non-scalar loss") {
  Tape tape;
  Tensor t({2});
  Node* leaf = tape.leaf(t, "t");
  CHECK_THROWS_AS(tape.backward(leaf), ConfigError);
}
