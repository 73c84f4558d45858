#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pointgen/point_cloud.hpp"
#include "pointgen/tensor.hpp"

namespace pointgen::nn {

// Reverse-mode tape. Nodes are owned by the tape and live for one forward /
// backward pass; parameters are referenced, not copied, and their gradients
// are read off the leaf nodes after backward().
struct Node {
  Tensor value;
  Tensor grad;  // allocated in backward()
  bool needs_grad = false;
  std::vector<Node*> parents;
  std::function<void(Node&)> backprop;  // pull own grad, push into parents
  std::string name;
};

class Tape {
 public:
  Node* constant(Tensor value);
  Node* leaf(const Tensor& value, std::string name);

  Node* add(Node* a, Node* b);
  Node* relu(Node* x);
  Node* reshape(Node* x, std::vector<int> shape);
  Node* concat(const std::vector<Node*>& parts, int axis);

  // x: (rows, in), w: (out, in), b: (out) or nullptr -> (rows, out)
  Node* linear(Node* x, Node* w, Node* b);

  // x: (IC, H, W), w: (OC, IC, k, k), b: (OC). Output spatial dim:
  // floor((H + 2 pad - k) / stride) + 1.
  Node* conv2d(Node* x, Node* w, Node* b, int stride, int pad);

  // Fractionally-strided counterpart mapping H -> stride * H for pad = k/2.
  // out[o, oy, ox] sums x[i, iy, ix] * w[o, i, ky, kx] over integral
  // iy = (oy + pad - ky) / stride.
  Node* deconv2d(Node* x, Node* w, Node* b, int stride, int pad);

  // x: (N, F), idx: M row indices -> (M, F); backward scatter-adds.
  Node* gather_rows(Node* x, std::vector<int> idx);

  // x: (G, K, F), mask: (G, K) -> (G, F): max over rows with mask 1.
  // Gradient routes to the first max row.
  Node* masked_rowmax(Node* x, const Tensor& mask);

  // pred: (N, 3) -> scalar. Both directional sums of squared nearest
  // distances; nearest-neighbor ties resolve to the lowest index.
  Node* chamfer_sq(Node* pred, const PointCloud& gt);

  // logits: (C) -> scalar negative log softmax probability of label.
  Node* softmax_cross_entropy(Node* logits, int label);

  Node* scale(Node* x, double factor);

  void backward(Node* loss);

  std::size_t node_count() const { return nodes_.size(); }

 private:
  Node* make(Tensor value, std::vector<Node*> parents);
  std::vector<std::unique_ptr<Node>> nodes_;
};

}  // namespace pointgen::nn
