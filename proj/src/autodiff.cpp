#include "pointgen/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pointgen/error.hpp"

namespace pointgen::nn {

Node* Tape::make(Tensor value, std::vector<Node*> parents) {
  auto node = std::make_unique<Node>();
  node->value = std::move(value);
  node->parents = std::move(parents);
  for (Node* p : node->parents)
    if (p->needs_grad) node->needs_grad = true;
  nodes_.push_back(std::move(node));
  return nodes_.back().get();
}

Node* Tape::constant(Tensor value) { return make(std::move(value), {}); }

Node* Tape::leaf(const Tensor& value, std::string name) {
  Node* n = make(value, {});
  n->needs_grad = true;
  n->name = std::move(name);
  return n;
}

void Tape::backward(Node* loss) {
  if (loss->value.size() != 1)
    throw ConfigError("backward: loss must be scalar");
  for (auto& n : nodes_)
    if (n->needs_grad) {
      n->grad = Tensor(n->value.shape());
    }
  if (!loss->needs_grad)
    throw ConfigError("backward: loss does not depend on any leaf");
  loss->grad.fill(1.0);
  // Creation order is a topological order; sweep it in reverse.
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    Node& n = **it;
    if (n.needs_grad && n.backprop) n.backprop(n);
  }
}

Node* Tape::add(Node* a, Node* b) {
  if (!a->value.same_shape(b->value)) throw ConfigError("add: shape mismatch");
  Tensor out(a->value.shape());
  const std::int64_t n = out.size();
  for (std::int64_t i = 0; i < n; ++i) out[i] = a->value[i] + b->value[i];
  Node* node = make(std::move(out), {a, b});
  node->backprop = [a, b](Node& self) {
    const std::int64_t m = self.grad.size();
    if (a->needs_grad)
      for (std::int64_t i = 0; i < m; ++i) a->grad[i] += self.grad[i];
    if (b->needs_grad)
      for (std::int64_t i = 0; i < m; ++i) b->grad[i] += self.grad[i];
  };
  return node;
}

Node* Tape::relu(Node* x) {
  Tensor out(x->value.shape());
  const std::int64_t n = out.size();
  for (std::int64_t i = 0; i < n; ++i) out[i] = std::max(0.0, x->value[i]);
  Node* node = make(std::move(out), {x});
  node->backprop = [x](Node& self) {
    if (!x->needs_grad) return;
    const std::int64_t m = self.grad.size();
    for (std::int64_t i = 0; i < m; ++i)
      if (x->value[i] > 0.0) x->grad[i] += self.grad[i];
  };
  return node;
}

Node* Tape::reshape(Node* x, std::vector<int> shape) {
  Tensor out = x->value.reshaped(std::move(shape));
  Node* node = make(std::move(out), {x});
  node->backprop = [x](Node& self) {
    if (!x->needs_grad) return;
    const std::int64_t m = self.grad.size();
    for (std::int64_t i = 0; i < m; ++i) x->grad[i] += self.grad[i];
  };
  return node;
}

Node* Tape::concat(const std::vector<Node*>& parts, int axis) {
  if (parts.empty()) throw ConfigError("concat: no inputs");
  const int rank = parts[0]->value.rank();
  if (axis < 0 || axis >= rank) throw ConfigError("concat: bad axis");
  std::vector<int> shape = parts[0]->value.shape();
  int total = 0;
  for (Node* p : parts) {
    if (p->value.rank() != rank) throw ConfigError("concat: rank mismatch");
    for (int d = 0; d < rank; ++d)
      if (d != axis && p->value.dim(d) != shape[static_cast<std::size_t>(d)])
        throw ConfigError("concat: shape mismatch off-axis");
    total += p->value.dim(axis);
  }
  shape[static_cast<std::size_t>(axis)] = total;

  // outer = product of dims before axis, inner = product after.
  std::int64_t outer = 1, inner = 1;
  for (int d = 0; d < axis; ++d) outer *= shape[static_cast<std::size_t>(d)];
  for (int d = axis + 1; d < rank; ++d) inner *= shape[static_cast<std::size_t>(d)];

  Tensor out(shape);
  std::int64_t off = 0;
  for (Node* p : parts) {
    const std::int64_t width = p->value.dim(axis) * inner;
    for (std::int64_t o = 0; o < outer; ++o) {
      const double* src = p->value.data() + o * width;
      double* dst = out.data() + o * (static_cast<std::int64_t>(total) * inner) + off;
      std::copy(src, src + width, dst);
    }
    off += width;
  }
  Node* node = make(std::move(out), parts);
  const std::int64_t total_inner = static_cast<std::int64_t>(total) * inner;
  node->backprop = [parts, outer, total_inner](Node& self) {
    std::int64_t off2 = 0;
    for (Node* p : parts) {
      const std::int64_t w = p->value.size() / outer;
      if (p->needs_grad) {
        for (std::int64_t o = 0; o < outer; ++o) {
          const double* src = self.grad.data() + o * total_inner + off2;
          double* dst = p->grad.data() + o * w;
          for (std::int64_t i = 0; i < w; ++i) dst[i] += src[i];
        }
      }
      off2 += w;
    }
  };
  return node;
}

Node* Tape::linear(Node* x, Node* w, Node* b) {
  if (x->value.rank() != 2 || w->value.rank() != 2)
    throw ConfigError("linear: expects rank-2 input and weight");
  const int rows = x->value.dim(0);
  const int in = x->value.dim(1);
  const int out_w = w->value.dim(0);
  if (w->value.dim(1) != in) throw ConfigError("linear: weight width mismatch");
  if (b != nullptr && (b->value.rank() != 1 || b->value.dim(0) != out_w))
    throw ConfigError("linear: bias shape mismatch");

  Tensor out({rows, out_w});
  for (int r = 0; r < rows; ++r) {
    const double* xr = x->value.data() + static_cast<std::int64_t>(r) * in;
    double* yr = out.data() + static_cast<std::int64_t>(r) * out_w;
    for (int o = 0; o < out_w; ++o) {
      const double* wo = w->value.data() + static_cast<std::int64_t>(o) * in;
      double acc = b ? b->value[o] : 0.0;
      for (int i = 0; i < in; ++i) acc += xr[i] * wo[i];
      yr[o] = acc;
    }
  }
  std::vector<Node*> parents = {x, w};
  if (b) parents.push_back(b);
  Node* node = make(std::move(out), parents);
  node->backprop = [x, w, b, rows, in, out_w](Node& self) {
    for (int r = 0; r < rows; ++r) {
      const double* gr = self.grad.data() + static_cast<std::int64_t>(r) * out_w;
      const double* xr = x->value.data() + static_cast<std::int64_t>(r) * in;
      if (x->needs_grad) {
        double* dx = x->grad.data() + static_cast<std::int64_t>(r) * in;
        for (int o = 0; o < out_w; ++o) {
          const double g = gr[o];
          if (g == 0.0) continue;
          const double* wo = w->value.data() + static_cast<std::int64_t>(o) * in;
          for (int i = 0; i < in; ++i) dx[i] += g * wo[i];
        }
      }
      if (w->needs_grad) {
        for (int o = 0; o < out_w; ++o) {
          const double g = gr[o];
          if (g == 0.0) continue;
          double* dw = w->grad.data() + static_cast<std::int64_t>(o) * in;
          for (int i = 0; i < in; ++i) dw[i] += g * xr[i];
        }
      }
      if (b != nullptr && b->needs_grad)
        for (int o = 0; o < out_w; ++o) b->grad[o] += gr[o];
    }
  };
  return node;
}

Node* Tape::conv2d(Node* x, Node* w, Node* b, int stride, int pad) {
  if (x->value.rank() != 3 || w->value.rank() != 4)
    throw ConfigError("conv2d: expects (C,H,W) input and (OC,IC,k,k) weight");
  const int ic = x->value.dim(0), h = x->value.dim(1), wd = x->value.dim(2);
  const int oc = w->value.dim(0), k = w->value.dim(2);
  if (w->value.dim(1) != ic || w->value.dim(3) != k)
    throw ConfigError("conv2d: weight shape mismatch");
  const int oh = (h + 2 * pad - k) / stride + 1;
  const int ow = (wd + 2 * pad - k) / stride + 1;
  if (oh < 1 || ow < 1) throw ConfigError("conv2d: output collapses to zero");

  Tensor out({oc, oh, ow});
  for (int o = 0; o < oc; ++o) {
    const double bias = b ? b->value[o] : 0.0;
    for (int oy = 0; oy < oh; ++oy)
      for (int ox = 0; ox < ow; ++ox) {
        double acc = bias;
        for (int i = 0; i < ic; ++i) {
          const double* xin = x->value.data() + (static_cast<std::int64_t>(i) * h) * wd;
          const double* wk = w->value.data() +
                             ((static_cast<std::int64_t>(o) * ic + i) * k) * k;
          for (int ky = 0; ky < k; ++ky) {
            const int iy = oy * stride + ky - pad;
            if (iy < 0 || iy >= h) continue;
            for (int kx = 0; kx < k; ++kx) {
              const int ix = ox * stride + kx - pad;
              if (ix < 0 || ix >= wd) continue;
              acc += xin[static_cast<std::int64_t>(iy) * wd + ix] * wk[ky * k + kx];
            }
          }
        }
        out.at3(o, oy, ox) = acc;
      }
  }
  std::vector<Node*> parents = {x, w};
  if (b) parents.push_back(b);
  Node* node = make(std::move(out), parents);
  node->backprop = [x, w, b, stride, pad, ic, h, wd, oc, k, oh, ow](Node& self) {
    for (int o = 0; o < oc; ++o) {
      for (int oy = 0; oy < oh; ++oy)
        for (int ox = 0; ox < ow; ++ox) {
          const double g = self.grad.at3(o, oy, ox);
          if (g == 0.0) continue;
          if (b != nullptr && b->needs_grad) b->grad[o] += g;
          for (int i = 0; i < ic; ++i) {
            const double* xin = x->value.data() + (static_cast<std::int64_t>(i) * h) * wd;
            const double* wk = w->value.data() +
                               ((static_cast<std::int64_t>(o) * ic + i) * k) * k;
            double* dxin = x->needs_grad
                               ? x->grad.data() + (static_cast<std::int64_t>(i) * h) * wd
                               : nullptr;
            double* dwk = w->needs_grad
                              ? w->grad.data() +
                                    ((static_cast<std::int64_t>(o) * ic + i) * k) * k
                              : nullptr;
            for (int ky = 0; ky < k; ++ky) {
              const int iy = oy * stride + ky - pad;
              if (iy < 0 || iy >= h) continue;
              for (int kx = 0; kx < k; ++kx) {
                const int ix = ox * stride + kx - pad;
                if (ix < 0 || ix >= wd) continue;
                const std::int64_t xi = static_cast<std::int64_t>(iy) * wd + ix;
                if (dwk) dwk[ky * k + kx] += g * xin[xi];
                if (dxin) dxin[xi] += g * wk[ky * k + kx];
              }
            }
          }
        }
    }
  };
  return node;
}

Node* Tape::deconv2d(Node* x, Node* w, Node* b, int stride, int pad) {
  if (x->value.rank() != 3 || w->value.rank() != 4)
    throw ConfigError("deconv2d: expects (C,H,W) input and (OC,IC,k,k) weight");
  const int ic = x->value.dim(0), h = x->value.dim(1), wd = x->value.dim(2);
  const int oc = w->value.dim(0), k = w->value.dim(2);
  if (w->value.dim(1) != ic || w->value.dim(3) != k)
    throw ConfigError("deconv2d: weight shape mismatch");
  const int oh = h * stride;
  const int ow = wd * stride;

  Tensor out({oc, oh, ow});
  for (int o = 0; o < oc; ++o) {
    const double bias = b ? b->value[o] : 0.0;
    for (int oy = 0; oy < oh; ++oy)
      for (int ox = 0; ox < ow; ++ox) {
        double acc = bias;
        for (int i = 0; i < ic; ++i) {
          const double* xin = x->value.data() + (static_cast<std::int64_t>(i) * h) * wd;
          const double* wk = w->value.data() +
                             ((static_cast<std::int64_t>(o) * ic + i) * k) * k;
          for (int ky = 0; ky < k; ++ky) {
            const int ny = oy + pad - ky;
            if (ny < 0 || ny % stride != 0) continue;
            const int iy = ny / stride;
            if (iy >= h) continue;
            for (int kx = 0; kx < k; ++kx) {
              const int nx = ox + pad - kx;
              if (nx < 0 || nx % stride != 0) continue;
              const int ix = nx / stride;
              if (ix >= wd) continue;
              acc += xin[static_cast<std::int64_t>(iy) * wd + ix] * wk[ky * k + kx];
            }
          }
        }
        out.at3(o, oy, ox) = acc;
      }
  }
  std::vector<Node*> parents = {x, w};
  if (b) parents.push_back(b);
  Node* node = make(std::move(out), parents);
  node->backprop = [x, w, b, stride, pad, ic, h, wd, oc, k, oh, ow](Node& self) {
    for (int o = 0; o < oc; ++o) {
      for (int oy = 0; oy < oh; ++oy)
        for (int ox = 0; ox < ow; ++ox) {
          const double g = self.grad.at3(o, oy, ox);
          if (g == 0.0) continue;
          if (b != nullptr && b->needs_grad) b->grad[o] += g;
          for (int i = 0; i < ic; ++i) {
            const double* xin = x->value.data() + (static_cast<std::int64_t>(i) * h) * wd;
            const double* wk = w->value.data() +
                               ((static_cast<std::int64_t>(o) * ic + i) * k) * k;
            double* dxin = x->needs_grad
                               ? x->grad.data() + (static_cast<std::int64_t>(i) * h) * wd
                               : nullptr;
            double* dwk = w->needs_grad
                              ? w->grad.data() +
                                    ((static_cast<std::int64_t>(o) * ic + i) * k) * k
                              : nullptr;
            for (int ky = 0; ky < k; ++ky) {
              const int ny = oy + pad - ky;
              if (ny < 0 || ny % stride != 0) continue;
              const int iy = ny / stride;
              if (iy >= h) continue;
              for (int kx = 0; kx < k; ++kx) {
                const int nx = ox + pad - kx;
                if (nx < 0 || nx % stride != 0) continue;
                const int ix = nx / stride;
                if (ix >= wd) continue;
                const std::int64_t xi = static_cast<std::int64_t>(iy) * wd + ix;
                if (dwk) dwk[ky * k + kx] += g * xin[xi];
                if (dxin) dxin[xi] += g * wk[ky * k + kx];
              }
            }
          }
        }
    }
  };
  return node;
}

Node* Tape::gather_rows(Node* x, std::vector<int> idx) {
  if (x->value.rank() != 2) throw ConfigError("gather_rows: expects (N,F)");
  const int n = x->value.dim(0), f = x->value.dim(1);
  Tensor out({static_cast<int>(idx.size()), f});
  for (std::size_t m = 0; m < idx.size(); ++m) {
    const int i = idx[m];
    if (i < 0 || i >= n) throw ConfigError("gather_rows: index out of range");
    std::copy(x->value.data() + static_cast<std::int64_t>(i) * f,
              x->value.data() + static_cast<std::int64_t>(i + 1) * f,
              out.data() + static_cast<std::int64_t>(m) * f);
  }
  Node* node = make(std::move(out), {x});
  node->backprop = [x, idx = std::move(idx), f](Node& self) {
    if (!x->needs_grad) return;
    for (std::size_t m = 0; m < idx.size(); ++m) {
      const double* src = self.grad.data() + static_cast<std::int64_t>(m) * f;
      double* dst = x->grad.data() + static_cast<std::int64_t>(idx[m]) * f;
      for (int j = 0; j < f; ++j) dst[j] += src[j];
    }
  };
  return node;
}

Node* Tape::masked_rowmax(Node* x, const Tensor& mask) {
  if (x->value.rank() != 3) throw ConfigError("masked_rowmax: expects (G,K,F)");
  const int g = x->value.dim(0), k = x->value.dim(1), f = x->value.dim(2);
  if (mask.rank() != 2 || mask.dim(0) != g || mask.dim(1) != k)
    throw ConfigError("masked_rowmax: mask shape mismatch");
  Tensor out({g, f});
  // argmax per (group, feature); -1 when every row is masked out.
  std::vector<int> arg(static_cast<std::size_t>(g) * f, -1);
  for (int gi = 0; gi < g; ++gi) {
    for (int fi = 0; fi < f; ++fi) {
      double best = -std::numeric_limits<double>::infinity();
      int best_k = -1;
      for (int ki = 0; ki < k; ++ki) {
        if (mask.at2(gi, ki) == 0.0) continue;
        const double v = x->value.at3(gi, ki, fi);
        if (v > best) {
          best = v;
          best_k = ki;
        }
      }
      if (best_k < 0) throw ConfigError("masked_rowmax: empty group");
      out.at2(gi, fi) = best;
      arg[static_cast<std::size_t>(gi) * f + fi] = best_k;
    }
  }
  Node* node = make(std::move(out), {x});
  node->backprop = [x, arg = std::move(arg), g, f](Node& self) {
    if (!x->needs_grad) return;
    for (int gi = 0; gi < g; ++gi)
      for (int fi = 0; fi < f; ++fi)
        x->grad.at3(gi, arg[static_cast<std::size_t>(gi) * f + fi], fi) +=
            self.grad.at2(gi, fi);
  };
  return node;
}

Node* Tape::chamfer_sq(Node* pred, const PointCloud& gt) {
  if (pred->value.rank() != 2 || pred->value.dim(1) != 3)
    throw ConfigError("chamfer_sq: pred must be (N,3)");
  if (gt.points.empty()) throw DegenerateGeometryError("chamfer_sq: empty target");
  const int n = pred->value.dim(0);
  const int m = static_cast<int>(gt.points.size());
  if (n < 1) throw DegenerateGeometryError("chamfer_sq: empty prediction");

  auto pt = [&](int i) {
    return Vec3{pred->value.at2(i, 0), pred->value.at2(i, 1), pred->value.at2(i, 2)};
  };
  std::vector<int> nn_pred(static_cast<std::size_t>(n));  // pred -> gt
  std::vector<int> nn_gt(static_cast<std::size_t>(m));    // gt -> pred
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec3 p = pt(i);
    double best = std::numeric_limits<double>::infinity();
    int bj = 0;
    for (int j = 0; j < m; ++j) {
      const double d = dist2(p, gt.points[static_cast<std::size_t>(j)]);
      if (d < best) {  // strict <: ties keep the lowest index
        best = d;
        bj = j;
      }
    }
    nn_pred[static_cast<std::size_t>(i)] = bj;
    total += best;
  }
  for (int j = 0; j < m; ++j) {
    const Vec3& q = gt.points[static_cast<std::size_t>(j)];
    double best = std::numeric_limits<double>::infinity();
    int bi = 0;
    for (int i = 0; i < n; ++i) {
      const double d = dist2(pt(i), q);
      if (d < best) {
        best = d;
        bi = i;
      }
    }
    nn_gt[static_cast<std::size_t>(j)] = bi;
    total += best;
  }
  Tensor out({1});
  out[0] = total;
  Node* node = make(std::move(out), {pred});
  // Copy the target points: the tape may outlive the caller's cloud.
  node->backprop = [pred, gt_points = gt.points, nn_pred = std::move(nn_pred),
                    nn_gt = std::move(nn_gt), n, m](Node& self) {
    if (!pred->needs_grad) return;
    const double g = self.grad[0];
    for (int i = 0; i < n; ++i) {
      const Vec3& q = gt_points[static_cast<std::size_t>(nn_pred[static_cast<std::size_t>(i)])];
      pred->grad.at2(i, 0) += g * 2.0 * (pred->value.at2(i, 0) - q.x);
      pred->grad.at2(i, 1) += g * 2.0 * (pred->value.at2(i, 1) - q.y);
      pred->grad.at2(i, 2) += g * 2.0 * (pred->value.at2(i, 2) - q.z);
    }
    for (int j = 0; j < m; ++j) {
      const int i = nn_gt[static_cast<std::size_t>(j)];
      const Vec3& q = gt_points[static_cast<std::size_t>(j)];
      pred->grad.at2(i, 0) += g * 2.0 * (pred->value.at2(i, 0) - q.x);
      pred->grad.at2(i, 1) += g * 2.0 * (pred->value.at2(i, 1) - q.y);
      pred->grad.at2(i, 2) += g * 2.0 * (pred->value.at2(i, 2) - q.z);
    }
  };
  return node;
}

Node* Tape::softmax_cross_entropy(Node* logits, int label) {
  if (logits->value.rank() != 1)
    throw ConfigError("softmax_cross_entropy: expects rank-1 logits");
  const int c = logits->value.dim(0);
  if (label < 0 || label >= c)
    throw ConfigError("softmax_cross_entropy: label out of range");
  double mx = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < c; ++i) mx = std::max(mx, logits->value[i]);
  double sum = 0.0;
  for (int i = 0; i < c; ++i) sum += std::exp(logits->value[i] - mx);
  const double logz = mx + std::log(sum);
  Tensor out({1});
  out[0] = logz - logits->value[label];
  Node* node = make(std::move(out), {logits});
  node->backprop = [logits, label, c, mx, sum](Node& self) {
    if (!logits->needs_grad) return;
    const double g = self.grad[0];
    for (int i = 0; i < c; ++i) {
      const double p = std::exp(logits->value[i] - mx) / sum;
      logits->grad[i] += g * (p - (i == label ? 1.0 : 0.0));
    }
  };
  return node;
}

Node* Tape::scale(Node* x, double factor) {
  Tensor out(x->value.shape());
  const std::int64_t n = out.size();
  for (std::int64_t i = 0; i < n; ++i) out[i] = x->value[i] * factor;
  Node* node = make(std::move(out), {x});
  node->backprop = [x, factor](Node& self) {
    if (!x->needs_grad) return;
    const std::int64_t m = self.grad.size();
    for (std::int64_t i = 0; i < m; ++i) x->grad[i] += factor * self.grad[i];
  };
  return node;
}

}  // namespace pointgen::nn
