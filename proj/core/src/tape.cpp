#include "netdelay/tape.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace netdelay::nn {

namespace {

constexpr double kSeluLambda = 1.0507009873554805;
constexpr double kSeluAlpha = 1.6732632423543772;

using EMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapM = Eigen::Map<EMatrix>;
using MapC = Eigen::Map<const EMatrix>;

MapC as_matrix(const Tensor& t) { return MapC(t.data.data(), t.rows(), t.cols()); }
MapM as_matrix(Tensor& t) { return MapM(t.data.data(), t.rows(), t.cols()); }

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b))
    throw ShapeMismatch(std::string(op) + ": shapes " + a.shape_str() + " and " + b.shape_str() +
                        " differ");
}

}  // namespace

NodeId Tape::push(Tensor value, bool requires_grad, std::function<void()> backprop) {
  nodes_.push_back(Node{std::move(value), Tensor{}, requires_grad, false, std::move(backprop)});
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId Tape::leaf(const Tensor& value, bool requires_grad) {
  return push(value, requires_grad);
}

NodeId Tape::constant(Tensor value) { return push(std::move(value), false); }

Tensor& Tape::grad_ref(NodeId id) {
  Node& node = nodes_[static_cast<std::size_t>(id)];
  if (!node.grad_live) {
    node.grad = Tensor::zeros(node.value.shape);
    node.grad_live = true;
  }
  return node.grad;
}

const Tensor& Tape::grad(NodeId id) { return grad_ref(id); }

void Tape::backward(NodeId root) {
  if (value(root).numel() != 1)
    throw ShapeMismatch("backward root must be a scalar");
  grad_ref(root).data[0] = 1.0;
  for (std::int64_t i = static_cast<std::int64_t>(nodes_.size()) - 1; i >= 0; --i) {
    Node& node = nodes_[static_cast<std::size_t>(i)];
    if (node.grad_live && node.backprop) node.backprop();
  }
}

NodeId Tape::matmul(NodeId a, NodeId b) {
  const Tensor& ta = value(a);
  const Tensor& tb = value(b);
  if (ta.cols() != tb.rows())
    throw ShapeMismatch("matmul: inner dimensions " + ta.shape_str() + " x " + tb.shape_str());
  Tensor out({ta.rows(), tb.cols()});
  as_matrix(out) = as_matrix(ta) * as_matrix(tb);
  op_cost_ += 2.0 * static_cast<double>(ta.rows()) * static_cast<double>(ta.cols()) *
              static_cast<double>(tb.cols());
  const bool needs = nodes_[a].requires_grad || nodes_[b].requires_grad;
  NodeId id = push(std::move(out), needs, nullptr);
  nodes_[id].backprop = [this, a, b, id] {
    const Tensor& g = grad_ref(id);
    if (nodes_[a].requires_grad)
      as_matrix(grad_ref(a)) += as_matrix(g) * as_matrix(value(b)).transpose();
    if (nodes_[b].requires_grad)
      as_matrix(grad_ref(b)) += as_matrix(value(a)).transpose() * as_matrix(g);
  };
  return id;
}

NodeId Tape::add(NodeId a, NodeId b) {
  const Tensor& ta = value(a);
  const Tensor& tb = value(b);
  require_same_shape(ta, tb, "add");
  Tensor out = ta;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += tb.data[i];
  op_cost_ += static_cast<double>(ta.numel());
  const bool needs = nodes_[a].requires_grad || nodes_[b].requires_grad;
  NodeId id = push(std::move(out), needs);
  nodes_[id].backprop = [this, a, b, id] {
    const Tensor& g = grad_ref(id);
    if (nodes_[a].requires_grad) {
      Tensor& ga = grad_ref(a);
      for (std::size_t i = 0; i < g.data.size(); ++i) ga.data[i] += g.data[i];
    }
    if (nodes_[b].requires_grad) {
      Tensor& gb = grad_ref(b);
      for (std::size_t i = 0; i < g.data.size(); ++i) gb.data[i] += g.data[i];
    }
  };
  return id;
}

NodeId Tape::add_rowvec(NodeId a, NodeId bias) {
  const Tensor& ta = value(a);
  const Tensor& tb = value(bias);
  if (tb.numel() != ta.cols())
    throw ShapeMismatch("add_rowvec: bias " + tb.shape_str() + " vs " + ta.shape_str());
  Tensor out = ta;
  const std::int64_t m = ta.rows(), n = ta.cols();
  for (std::int64_t r = 0; r < m; ++r)
    for (std::int64_t c = 0; c < n; ++c) out.data[static_cast<std::size_t>(r * n + c)] += tb.data[static_cast<std::size_t>(c)];
  op_cost_ += static_cast<double>(ta.numel());
  const bool needs = nodes_[a].requires_grad || nodes_[bias].requires_grad;
  NodeId id = push(std::move(out), needs);
  nodes_[id].backprop = [this, a, bias, id, m, n] {
    const Tensor& g = grad_ref(id);
    if (nodes_[a].requires_grad) {
      Tensor& ga = grad_ref(a);
      for (std::size_t i = 0; i < g.data.size(); ++i) ga.data[i] += g.data[i];
    }
    if (nodes_[bias].requires_grad) {
      Tensor& gb = grad_ref(bias);
      for (std::int64_t r = 0; r < m; ++r)
        for (std::int64_t c = 0; c < n; ++c)
          gb.data[static_cast<std::size_t>(c)] += g.data[static_cast<std::size_t>(r * n + c)];
    }
  };
  return id;
}

NodeId Tape::hadamard(NodeId a, NodeId b) {
  const Tensor& ta = value(a);
  const Tensor& tb = value(b);
  require_same_shape(ta, tb, "hadamard");
  Tensor out = ta;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] *= tb.data[i];
  op_cost_ += static_cast<double>(ta.numel());
  const bool needs = nodes_[a].requires_grad || nodes_[b].requires_grad;
  NodeId id = push(std::move(out), needs);
  nodes_[id].backprop = [this, a, b, id] {
    const Tensor& g = grad_ref(id);
    if (nodes_[a].requires_grad) {
      Tensor& ga = grad_ref(a);
      const Tensor& vb = value(b);
      for (std::size_t i = 0; i < g.data.size(); ++i) ga.data[i] += g.data[i] * vb.data[i];
    }
    if (nodes_[b].requires_grad) {
      Tensor& gb = grad_ref(b);
      const Tensor& va = value(a);
      for (std::size_t i = 0; i < g.data.size(); ++i) gb.data[i] += g.data[i] * va.data[i];
    }
  };
  return id;
}

NodeId Tape::affine(NodeId a, double scale, double shift) {
  Tensor out = value(a);
  for (double& x : out.data) x = scale * x + shift;
  op_cost_ += static_cast<double>(out.numel());
  NodeId id = push(std::move(out), nodes_[a].requires_grad);
  nodes_[id].backprop = [this, a, id, scale] {
    if (!nodes_[a].requires_grad) return;
    const Tensor& g = grad_ref(id);
    Tensor& ga = grad_ref(a);
    for (std::size_t i = 0; i < g.data.size(); ++i) ga.data[i] += scale * g.data[i];
  };
  return id;
}

NodeId Tape::selu(NodeId a) {
  Tensor out = value(a);
  for (double& x : out.data)
    x = x > 0.0 ? kSeluLambda * x : kSeluLambda * kSeluAlpha * std::expm1(x);
  op_cost_ += static_cast<double>(out.numel());
  NodeId id = push(std::move(out), nodes_[a].requires_grad);
  nodes_[id].backprop = [this, a, id] {
    if (!nodes_[a].requires_grad) return;
    const Tensor& g = grad_ref(id);
    const Tensor& x = value(a);
    const Tensor& y = value(id);
    Tensor& ga = grad_ref(a);
    for (std::size_t i = 0; i < g.data.size(); ++i) {
      const double slope =
          x.data[i] > 0.0 ? kSeluLambda : y.data[i] + kSeluLambda * kSeluAlpha;
      ga.data[i] += g.data[i] * slope;
    }
  };
  return id;
}

NodeId Tape::sigmoid(NodeId a) {
  Tensor out = value(a);
  for (double& x : out.data) x = 1.0 / (1.0 + std::exp(-x));
  op_cost_ += static_cast<double>(out.numel());
  NodeId id = push(std::move(out), nodes_[a].requires_grad);
  nodes_[id].backprop = [this, a, id] {
    if (!nodes_[a].requires_grad) return;
    const Tensor& g = grad_ref(id);
    const Tensor& y = value(id);
    Tensor& ga = grad_ref(a);
    for (std::size_t i = 0; i < g.data.size(); ++i)
      ga.data[i] += g.data[i] * y.data[i] * (1.0 - y.data[i]);
  };
  return id;
}

NodeId Tape::tanh(NodeId a) {
  Tensor out = value(a);
  for (double& x : out.data) x = std::tanh(x);
  op_cost_ += static_cast<double>(out.numel());
  NodeId id = push(std::move(out), nodes_[a].requires_grad);
  nodes_[id].backprop = [this, a, id] {
    if (!nodes_[a].requires_grad) return;
    const Tensor& g = grad_ref(id);
    const Tensor& y = value(id);
    Tensor& ga = grad_ref(a);
    for (std::size_t i = 0; i < g.data.size(); ++i)
      ga.data[i] += g.data[i] * (1.0 - y.data[i] * y.data[i]);
  };
  return id;
}

NodeId Tape::pad_cols(NodeId a, std::int64_t new_cols) {
  const Tensor& ta = value(a);
  const std::int64_t m = ta.rows(), k = ta.cols();
  if (new_cols < k) throw ShapeMismatch("pad_cols: cannot shrink " + ta.shape_str());
  Tensor out({m, new_cols});
  for (std::int64_t r = 0; r < m; ++r)
    for (std::int64_t c = 0; c < k; ++c) out(r, c) = ta(r, c);
  NodeId id = push(std::move(out), nodes_[a].requires_grad);
  nodes_[id].backprop = [this, a, id, m, k] {
    if (!nodes_[a].requires_grad) return;
    const Tensor& g = grad_ref(id);
    Tensor& ga = grad_ref(a);
    const std::int64_t n = g.cols();
    for (std::int64_t r = 0; r < m; ++r)
      for (std::int64_t c = 0; c < k; ++c)
        ga.data[static_cast<std::size_t>(r * k + c)] += g.data[static_cast<std::size_t>(r * n + c)];
  };
  return id;
}

NodeId Tape::concat_cols(NodeId a, NodeId b) {
  const Tensor& ta = value(a);
  const Tensor& tb = value(b);
  if (ta.rows() != tb.rows())
    throw ShapeMismatch("concat_cols: row counts differ " + ta.shape_str() + " vs " +
                        tb.shape_str());
  const std::int64_t m = ta.rows(), ka = ta.cols(), kb = tb.cols();
  Tensor out({m, ka + kb});
  for (std::int64_t r = 0; r < m; ++r) {
    for (std::int64_t c = 0; c < ka; ++c) out(r, c) = ta(r, c);
    for (std::int64_t c = 0; c < kb; ++c) out(r, ka + c) = tb(r, c);
  }
  const bool needs = nodes_[a].requires_grad || nodes_[b].requires_grad;
  NodeId id = push(std::move(out), needs);
  nodes_[id].backprop = [this, a, b, id, m, ka, kb] {
    const Tensor& g = grad_ref(id);
    const std::int64_t n = ka + kb;
    if (nodes_[a].requires_grad) {
      Tensor& ga = grad_ref(a);
      for (std::int64_t r = 0; r < m; ++r)
        for (std::int64_t c = 0; c < ka; ++c)
          ga.data[static_cast<std::size_t>(r * ka + c)] +=
              g.data[static_cast<std::size_t>(r * n + c)];
    }
    if (nodes_[b].requires_grad) {
      Tensor& gb = grad_ref(b);
      for (std::int64_t r = 0; r < m; ++r)
        for (std::int64_t c = 0; c < kb; ++c)
          gb.data[static_cast<std::size_t>(r * kb + c)] +=
              g.data[static_cast<std::size_t>(r * n + ka + c)];
    }
  };
  return id;
}

NodeId Tape::edge_matvec(NodeId a_flat, NodeId h, const std::vector<std::int32_t>& index,
                         std::int64_t dim) {
  const Tensor& ta = value(a_flat);
  const Tensor& th = value(h);
  const std::int64_t rows = ta.rows();
  if (ta.cols() != dim * dim)
    throw ShapeMismatch("edge_matvec: flat matrices " + ta.shape_str() + " vs dim " +
                        std::to_string(dim));
  if (th.cols() != dim) throw ShapeMismatch("edge_matvec: state " + th.shape_str());
  if (static_cast<std::int64_t>(index.size()) != rows)
    throw ShapeMismatch("edge_matvec: index size mismatch");

  Tensor out({rows, dim});
  for (std::int64_t r = 0; r < rows; ++r) {
    const double* mat = &ta.data[static_cast<std::size_t>(r * dim * dim)];
    const double* vec = &th.data[static_cast<std::size_t>(index[static_cast<std::size_t>(r)] * dim)];
    double* dst = &out.data[static_cast<std::size_t>(r * dim)];
    for (std::int64_t i = 0; i < dim; ++i) {
      double acc = 0.0;
      const double* row = mat + i * dim;
      for (std::int64_t j = 0; j < dim; ++j) acc += row[j] * vec[j];
      dst[i] = acc;
    }
  }
  op_cost_ += 2.0 * static_cast<double>(rows) * static_cast<double>(dim * dim);
  const bool needs = nodes_[a_flat].requires_grad || nodes_[h].requires_grad;
  NodeId id = push(std::move(out), needs);
  nodes_[id].backprop = [this, a_flat, h, id, &index, dim] {
    const Tensor& g = grad_ref(id);
    const Tensor& ta = value(a_flat);
    const Tensor& th = value(h);
    const std::int64_t rows = ta.rows();
    const bool need_a = nodes_[a_flat].requires_grad;
    const bool need_h = nodes_[h].requires_grad;
    Tensor* ga = need_a ? &grad_ref(a_flat) : nullptr;
    Tensor* gh = need_h ? &grad_ref(h) : nullptr;
    for (std::int64_t r = 0; r < rows; ++r) {
      const std::int64_t src = index[static_cast<std::size_t>(r)];
      const double* gout = &g.data[static_cast<std::size_t>(r * dim)];
      const double* vec = &th.data[static_cast<std::size_t>(src * dim)];
      const double* mat = &ta.data[static_cast<std::size_t>(r * dim * dim)];
      if (need_a) {
        double* gmat = &ga->data[static_cast<std::size_t>(r * dim * dim)];
        for (std::int64_t i = 0; i < dim; ++i)
          for (std::int64_t j = 0; j < dim; ++j) gmat[i * dim + j] += gout[i] * vec[j];
      }
      if (need_h) {
        double* gvec = &gh->data[static_cast<std::size_t>(src * dim)];
        for (std::int64_t i = 0; i < dim; ++i)
          for (std::int64_t j = 0; j < dim; ++j) gvec[j] += gout[i] * mat[i * dim + j];
      }
    }
  };
  return id;
}

NodeId Tape::segment_sum(NodeId a, const std::vector<std::int32_t>& segment,
                         std::int64_t num_segments) {
  const Tensor& ta = value(a);
  const std::int64_t m = ta.rows(), d = ta.cols();
  if (static_cast<std::int64_t>(segment.size()) != m)
    throw ShapeMismatch("segment_sum: segment size mismatch");
  Tensor out({num_segments, d});
  for (std::int64_t r = 0; r < m; ++r) {
    const std::int64_t s = segment[static_cast<std::size_t>(r)];
    for (std::int64_t c = 0; c < d; ++c)
      out.data[static_cast<std::size_t>(s * d + c)] += ta.data[static_cast<std::size_t>(r * d + c)];
  }
  op_cost_ += static_cast<double>(m * d);
  NodeId id = push(std::move(out), nodes_[a].requires_grad);
  nodes_[id].backprop = [this, a, id, &segment, m, d] {
    if (!nodes_[a].requires_grad) return;
    const Tensor& g = grad_ref(id);
    Tensor& ga = grad_ref(a);
    for (std::int64_t r = 0; r < m; ++r) {
      const std::int64_t s = segment[static_cast<std::size_t>(r)];
      for (std::int64_t c = 0; c < d; ++c)
        ga.data[static_cast<std::size_t>(r * d + c)] +=
            g.data[static_cast<std::size_t>(s * d + c)];
    }
  };
  return id;
}

NodeId Tape::batch_norm(NodeId x, NodeId gamma, NodeId beta, Tensor* running_mean,
                        Tensor* running_var, bool training, double momentum, double eps,
                        bool update_running) {
  const Tensor& tx = value(x);
  const std::int64_t m = tx.rows(), d = tx.cols();
  if (value(gamma).numel() != d || value(beta).numel() != d)
    throw ShapeMismatch("batch_norm: scale/shift length " + std::to_string(d) + " expected");
  if (running_mean->numel() != d || running_var->numel() != d)
    throw ShapeMismatch("batch_norm: running stats length mismatch");

  Tensor xhat({m, d});
  std::vector<double> inv_std(static_cast<std::size_t>(d));

  if (training) {
    if (m < 2) throw BatchTooSmall("batch_norm in training mode needs at least 2 rows");
    std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
    std::vector<double> var(static_cast<std::size_t>(d), 0.0);
    for (std::int64_t r = 0; r < m; ++r)
      for (std::int64_t c = 0; c < d; ++c) mean[static_cast<std::size_t>(c)] += tx(r, c);
    for (std::int64_t c = 0; c < d; ++c) mean[static_cast<std::size_t>(c)] /= static_cast<double>(m);
    for (std::int64_t r = 0; r < m; ++r)
      for (std::int64_t c = 0; c < d; ++c) {
        const double diff = tx(r, c) - mean[static_cast<std::size_t>(c)];
        var[static_cast<std::size_t>(c)] += diff * diff;
      }
    for (std::int64_t c = 0; c < d; ++c) var[static_cast<std::size_t>(c)] /= static_cast<double>(m);
    for (std::int64_t c = 0; c < d; ++c)
      inv_std[static_cast<std::size_t>(c)] = 1.0 / std::sqrt(var[static_cast<std::size_t>(c)] + eps);
    for (std::int64_t r = 0; r < m; ++r)
      for (std::int64_t c = 0; c < d; ++c)
        xhat(r, c) = (tx(r, c) - mean[static_cast<std::size_t>(c)]) * inv_std[static_cast<std::size_t>(c)];
    if (update_running) {
      // Running variance keeps the unbiased estimate.
      const double unbias = static_cast<double>(m) / static_cast<double>(m - 1);
      for (std::int64_t c = 0; c < d; ++c) {
        auto i = static_cast<std::size_t>(c);
        running_mean->data[i] = momentum * running_mean->data[i] + (1.0 - momentum) * mean[i];
        running_var->data[i] =
            momentum * running_var->data[i] + (1.0 - momentum) * var[i] * unbias;
      }
    }
  } else {
    for (std::int64_t c = 0; c < d; ++c)
      inv_std[static_cast<std::size_t>(c)] =
          1.0 / std::sqrt(running_var->data[static_cast<std::size_t>(c)] + eps);
    for (std::int64_t r = 0; r < m; ++r)
      for (std::int64_t c = 0; c < d; ++c)
        xhat(r, c) = (tx(r, c) - running_mean->data[static_cast<std::size_t>(c)]) *
                     inv_std[static_cast<std::size_t>(c)];
  }

  Tensor out({m, d});
  const Tensor& tg = value(gamma);
  const Tensor& tb = value(beta);
  for (std::int64_t r = 0; r < m; ++r)
    for (std::int64_t c = 0; c < d; ++c)
      out(r, c) = tg.data[static_cast<std::size_t>(c)] * xhat(r, c) +
                  tb.data[static_cast<std::size_t>(c)];
  op_cost_ += 8.0 * static_cast<double>(m * d);

  const bool needs =
      nodes_[x].requires_grad || nodes_[gamma].requires_grad || nodes_[beta].requires_grad;
  NodeId id = push(std::move(out), needs);
  // xhat and inv_std are captured by value for the backward pass.
  nodes_[id].backprop = [this, x, gamma, beta, id, training, m, d, xhat = std::move(xhat),
                         inv_std = std::move(inv_std)] {
    const Tensor& g = grad_ref(id);
    const Tensor& tg = value(gamma);
    if (nodes_[beta].requires_grad) {
      Tensor& gb = grad_ref(beta);
      for (std::int64_t r = 0; r < m; ++r)
        for (std::int64_t c = 0; c < d; ++c) gb.data[static_cast<std::size_t>(c)] += g(r, c);
    }
    if (nodes_[gamma].requires_grad) {
      Tensor& gg = grad_ref(gamma);
      for (std::int64_t r = 0; r < m; ++r)
        for (std::int64_t c = 0; c < d; ++c)
          gg.data[static_cast<std::size_t>(c)] += g(r, c) * xhat(r, c);
    }
    if (!nodes_[x].requires_grad) return;
    Tensor& gx = grad_ref(x);
    if (!training) {
      for (std::int64_t r = 0; r < m; ++r)
        for (std::int64_t c = 0; c < d; ++c)
          gx(r, c) += g(r, c) * tg.data[static_cast<std::size_t>(c)] *
                      inv_std[static_cast<std::size_t>(c)];
      return;
    }
    // Training mode: account for the batch statistics' dependence on x.
    for (std::int64_t c = 0; c < d; ++c) {
      double sum_dxhat = 0.0;
      double sum_dxhat_xhat = 0.0;
      for (std::int64_t r = 0; r < m; ++r) {
        const double dxhat = g(r, c) * tg.data[static_cast<std::size_t>(c)];
        sum_dxhat += dxhat;
        sum_dxhat_xhat += dxhat * xhat(r, c);
      }
      const double inv_m = 1.0 / static_cast<double>(m);
      for (std::int64_t r = 0; r < m; ++r) {
        const double dxhat = g(r, c) * tg.data[static_cast<std::size_t>(c)];
        gx(r, c) += inv_std[static_cast<std::size_t>(c)] *
                    (dxhat - inv_m * sum_dxhat - xhat(r, c) * inv_m * sum_dxhat_xhat);
      }
    }
  };
  return id;
}

NodeId Tape::mse(NodeId pred, NodeId target) {
  const Tensor& tp = value(pred);
  const Tensor& tt = value(target);
  if (tp.numel() != tt.numel())
    throw ShapeMismatch("mse: " + tp.shape_str() + " vs " + tt.shape_str());
  const std::int64_t n = tp.numel();
  double acc = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double diff = tp.data[static_cast<std::size_t>(i)] - tt.data[static_cast<std::size_t>(i)];
    acc += diff * diff;
  }
  op_cost_ += 3.0 * static_cast<double>(n);
  Tensor out = Tensor::scalar(acc / static_cast<double>(n));
  NodeId id = push(std::move(out), nodes_[pred].requires_grad);
  nodes_[id].backprop = [this, pred, target, id, n] {
    if (!nodes_[pred].requires_grad) return;
    const double g = grad_ref(id).data[0];
    const Tensor& tp = value(pred);
    const Tensor& tt = value(target);
    Tensor& gp = grad_ref(pred);
    const double scale = 2.0 * g / static_cast<double>(n);
    for (std::int64_t i = 0; i < n; ++i)
      gp.data[static_cast<std::size_t>(i)] +=
          scale * (tp.data[static_cast<std::size_t>(i)] - tt.data[static_cast<std::size_t>(i)]);
  };
  return id;
}

NodeId dense(Tape& tape, NodeId x, const DenseRefs& p) {
  return tape.add_rowvec(tape.matmul(x, p.weight), p.bias);
}

NodeId mlp(Tape& tape, NodeId x, const MlpRefs& p) {
  return dense(tape, tape.selu(dense(tape, x, p.hidden)), p.out);
}

NodeId gru_step(Tape& tape, const GruRefs& p, NodeId h, NodeId m) {
  NodeId z = tape.sigmoid(tape.add_rowvec(
      tape.add(tape.matmul(m, p.wz), tape.matmul(h, p.uz)), p.bz));
  NodeId r = tape.sigmoid(tape.add_rowvec(
      tape.add(tape.matmul(m, p.wr), tape.matmul(h, p.ur)), p.br));
  NodeId candidate = tape.tanh(tape.add_rowvec(
      tape.add(tape.matmul(m, p.wh), tape.matmul(tape.hadamard(r, h), p.uh)), p.bh));
  return tape.add(tape.hadamard(tape.affine(z, -1.0, 1.0), h), tape.hadamard(z, candidate));
}

}  // namespace netdelay::nn
