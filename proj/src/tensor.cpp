#include "semisup/tensor.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numeric>

#include "semisup/check.hpp"

namespace semisup {

namespace {

using MatrixRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRM = Eigen::Map<MatrixRM>;
using ConstMapRM = Eigen::Map<const MatrixRM>;

int element_count(const std::vector<int>& shape) {
  int n = 1;
  for (int d : shape) n *= d;
  return n;
}

std::shared_ptr<detail::TensorNode> make_leaf(std::vector<int> shape,
                                              std::vector<double> values) {
  auto node = std::make_shared<detail::TensorNode>();
  int n = element_count(shape);
  check(static_cast<int>(values.size()) == n, "tensor: values length does not match shape");
  node->shape = std::move(shape);
  node->values = std::move(values);
  node->grad.assign(static_cast<size_t>(n), 0.0);
  return node;
}

}  // namespace

// ---------------------------------------------------------------------------
// Tensor handle
// ---------------------------------------------------------------------------

Tensor Tensor::variable(std::vector<int> shape) {
  int n = element_count(shape);
  return Tensor(make_leaf(std::move(shape), std::vector<double>(static_cast<size_t>(n), 0.0)));
}

Tensor Tensor::variable(std::vector<int> shape, std::vector<double> values) {
  return Tensor(make_leaf(std::move(shape), std::move(values)));
}

Tensor Tensor::scalar(double v) { return Tensor(make_leaf({}, {v})); }

const std::vector<int>& Tensor::shape() const {
  check(defined(), "tensor: undefined handle");
  return node_->shape;
}

int Tensor::size() const {
  check(defined(), "tensor: undefined handle");
  return static_cast<int>(node_->values.size());
}

int Tensor::rows() const {
  const auto& s = shape();
  check(s.size() == 2, "tensor: rows() requires rank 2");
  return s[0];
}

int Tensor::cols() const {
  const auto& s = shape();
  check(s.size() == 2, "tensor: cols() requires rank 2");
  return s[1];
}

std::vector<double>& Tensor::values() {
  check(defined(), "tensor: undefined handle");
  return node_->values;
}

const std::vector<double>& Tensor::values() const {
  check(defined(), "tensor: undefined handle");
  return node_->values;
}

std::vector<double>& Tensor::grad() {
  check(defined(), "tensor: undefined handle");
  return node_->grad;
}

const std::vector<double>& Tensor::grad() const {
  check(defined(), "tensor: undefined handle");
  return node_->grad;
}

double Tensor::value() const {
  check(size() == 1, "tensor: value() requires a scalar");
  return node_->values[0];
}

double Tensor::at(int i, int j) const {
  const auto& s = shape();
  check(s.size() == 2 && i >= 0 && i < s[0] && j >= 0 && j < s[1],
        "tensor: at() index out of range");
  return node_->values[static_cast<size_t>(i) * s[1] + j];
}

void Tensor::zero_grad() {
  auto& g = grad();
  std::fill(g.begin(), g.end(), 0.0);
}

// ---------------------------------------------------------------------------
// Graph ops
// ---------------------------------------------------------------------------

Tensor Graph::record(detail::TensorNode node) {
  check(!backward_done_, "graph: cannot extend a graph after backward");
  node.node_id = static_cast<int>(tape_.size());
  node.grad.assign(node.values.size(), 0.0);
  auto ptr = std::make_shared<detail::TensorNode>(std::move(node));
  tape_.push_back(ptr);
  return Tensor(ptr);
}

Tensor Graph::matmul(const Tensor& a, const Tensor& b) {
  check(a.shape().size() == 2 && b.shape().size() == 2, "matmul: rank-2 operands required");
  const int m = a.rows(), k = a.cols(), n = b.cols();
  check_config(b.rows() == k, "matmul: inner dimensions disagree");

  detail::TensorNode node;
  node.shape = {m, n};
  node.values.resize(static_cast<size_t>(m) * n);
  MapRM(node.values.data(), m, n).noalias() =
      ConstMapRM(a.values().data(), m, k) * ConstMapRM(b.values().data(), k, n);

  auto pa = a.node_, pb = b.node_;
  node.parents = {pa, pb};
  node.backprop = [m, k, n, pa, pb](detail::TensorNode& self) {
    ConstMapRM gy(self.grad.data(), m, n);
    MapRM(pa->grad.data(), m, k).noalias() += gy * ConstMapRM(pb->values.data(), k, n).transpose();
    MapRM(pb->grad.data(), k, n).noalias() += ConstMapRM(pa->values.data(), m, k).transpose() * gy;
  };
  return record(std::move(node));
}

Tensor Graph::affine(const Tensor& x, const Tensor& w, const Tensor& b) {
  check(x.shape().size() == 2 && w.shape().size() == 2 && b.shape().size() == 1,
        "affine: expected matrix inputs and vector bias");
  const int m = x.rows(), k = x.cols(), n = w.cols();
  check_config(w.rows() == k, "affine: inner dimensions disagree");
  check_config(b.size() == n, "affine: bias width disagrees with weight");

  detail::TensorNode node;
  node.shape = {m, n};
  node.values.resize(static_cast<size_t>(m) * n);
  MapRM out(node.values.data(), m, n);
  out.noalias() = ConstMapRM(x.values().data(), m, k) * ConstMapRM(w.values().data(), k, n);
  out.rowwise() += Eigen::Map<const Eigen::RowVectorXd>(b.values().data(), n);

  auto px = x.node_, pw = w.node_, pbias = b.node_;
  node.parents = {px, pw, pbias};
  node.backprop = [m, k, n, px, pw, pbias](detail::TensorNode& self) {
    ConstMapRM gy(self.grad.data(), m, n);
    MapRM(px->grad.data(), m, k).noalias() += gy * ConstMapRM(pw->values.data(), k, n).transpose();
    MapRM(pw->grad.data(), k, n).noalias() += ConstMapRM(px->values.data(), m, k).transpose() * gy;
    Eigen::Map<Eigen::RowVectorXd>(pbias->grad.data(), n) += gy.colwise().sum();
  };
  return record(std::move(node));
}

Tensor Graph::transpose(const Tensor& a) {
  const int m = a.rows(), n = a.cols();
  detail::TensorNode node;
  node.shape = {n, m};
  node.values.resize(a.values().size());
  MapRM(node.values.data(), n, m) = ConstMapRM(a.values().data(), m, n).transpose();

  auto pa = a.node_;
  node.parents = {pa};
  node.backprop = [m, n, pa](detail::TensorNode& self) {
    MapRM(pa->grad.data(), m, n) += ConstMapRM(self.grad.data(), n, m).transpose();
  };
  return record(std::move(node));
}

namespace {

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  check_config(a.shape() == b.shape(), std::string(op) + ": shape mismatch");
}

}  // namespace

Tensor Graph::add(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "add");
  detail::TensorNode node;
  node.shape = a.shape();
  node.values.resize(a.values().size());
  for (size_t i = 0; i < node.values.size(); ++i)
    node.values[i] = a.values()[i] + b.values()[i];
  auto pa = a.node_, pb = b.node_;
  node.parents = {pa, pb};
  node.backprop = [pa, pb](detail::TensorNode& self) {
    for (size_t i = 0; i < self.grad.size(); ++i) {
      pa->grad[i] += self.grad[i];
      pb->grad[i] += self.grad[i];
    }
  };
  return record(std::move(node));
}

Tensor Graph::sub(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "sub");
  detail::TensorNode node;
  node.shape = a.shape();
  node.values.resize(a.values().size());
  for (size_t i = 0; i < node.values.size(); ++i)
    node.values[i] = a.values()[i] - b.values()[i];
  auto pa = a.node_, pb = b.node_;
  node.parents = {pa, pb};
  node.backprop = [pa, pb](detail::TensorNode& self) {
    for (size_t i = 0; i < self.grad.size(); ++i) {
      pa->grad[i] += self.grad[i];
      pb->grad[i] -= self.grad[i];
    }
  };
  return record(std::move(node));
}

Tensor Graph::mul(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "mul");
  detail::TensorNode node;
  node.shape = a.shape();
  node.values.resize(a.values().size());
  for (size_t i = 0; i < node.values.size(); ++i)
    node.values[i] = a.values()[i] * b.values()[i];
  auto pa = a.node_, pb = b.node_;
  node.parents = {pa, pb};
  node.backprop = [pa, pb](detail::TensorNode& self) {
    for (size_t i = 0; i < self.grad.size(); ++i) {
      pa->grad[i] += self.grad[i] * pb->values[i];
      pb->grad[i] += self.grad[i] * pa->values[i];
    }
  };
  return record(std::move(node));
}

Tensor Graph::div(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "div");
  detail::TensorNode node;
  node.shape = a.shape();
  node.values.resize(a.values().size());
  for (size_t i = 0; i < node.values.size(); ++i)
    node.values[i] = a.values()[i] / b.values()[i];
  auto pa = a.node_, pb = b.node_;
  node.parents = {pa, pb};
  node.backprop = [pa, pb](detail::TensorNode& self) {
    for (size_t i = 0; i < self.grad.size(); ++i) {
      double inv = 1.0 / pb->values[i];
      pa->grad[i] += self.grad[i] * inv;
      pb->grad[i] -= self.grad[i] * pa->values[i] * inv * inv;
    }
  };
  return record(std::move(node));
}

Tensor Graph::scale(const Tensor& a, double k) {
  detail::TensorNode node;
  node.shape = a.shape();
  node.values.resize(a.values().size());
  for (size_t i = 0; i < node.values.size(); ++i) node.values[i] = k * a.values()[i];
  auto pa = a.node_;
  node.parents = {pa};
  node.backprop = [k, pa](detail::TensorNode& self) {
    for (size_t i = 0; i < self.grad.size(); ++i) pa->grad[i] += k * self.grad[i];
  };
  return record(std::move(node));
}

Tensor Graph::relu(const Tensor& a) {
  detail::TensorNode node;
  node.shape = a.shape();
  node.values.resize(a.values().size());
  for (size_t i = 0; i < node.values.size(); ++i)
    node.values[i] = a.values()[i] > 0.0 ? a.values()[i] : 0.0;
  auto pa = a.node_;
  node.parents = {pa};
  node.backprop = [pa](detail::TensorNode& self) {
    for (size_t i = 0; i < self.grad.size(); ++i)
      if (pa->values[i] > 0.0) pa->grad[i] += self.grad[i];
  };
  return record(std::move(node));
}

Tensor Graph::log_clamped(const Tensor& a) {
  detail::TensorNode node;
  node.shape = a.shape();
  node.values.resize(a.values().size());
  for (size_t i = 0; i < node.values.size(); ++i)
    node.values[i] = std::log(std::max(a.values()[i], kLogClamp));
  auto pa = a.node_;
  node.parents = {pa};
  node.backprop = [pa](detail::TensorNode& self) {
    for (size_t i = 0; i < self.grad.size(); ++i)
      if (pa->values[i] >= kLogClamp) pa->grad[i] += self.grad[i] / pa->values[i];
  };
  return record(std::move(node));
}

Tensor Graph::softmax_rows(const Tensor& z) {
  const int m = z.rows(), n = z.cols();
  check_config(n >= 2, "softmax_rows: needs at least two classes");
  for (double v : z.values())
    if (!std::isfinite(v)) throw ContractError("softmax_rows: non-finite input");

  detail::TensorNode node;
  node.shape = {m, n};
  node.values.resize(z.values().size());
  for (int i = 0; i < m; ++i) {
    const double* zr = z.values().data() + static_cast<size_t>(i) * n;
    double* pr = node.values.data() + static_cast<size_t>(i) * n;
    double mx = zr[0];
    for (int j = 1; j < n; ++j) mx = std::max(mx, zr[j]);
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      pr[j] = std::exp(zr[j] - mx);
      s += pr[j];
    }
    for (int j = 0; j < n; ++j) pr[j] /= s;
  }

  auto pz = z.node_;
  node.parents = {pz};
  node.backprop = [m, n, pz](detail::TensorNode& self) {
    // dz_i = p_i * (g_i - sum_j g_j p_j), per row
    for (int i = 0; i < m; ++i) {
      const double* p = self.values.data() + static_cast<size_t>(i) * n;
      const double* g = self.grad.data() + static_cast<size_t>(i) * n;
      double* gz = pz->grad.data() + static_cast<size_t>(i) * n;
      double dot = 0.0;
      for (int j = 0; j < n; ++j) dot += g[j] * p[j];
      for (int j = 0; j < n; ++j) gz[j] += p[j] * (g[j] - dot);
    }
  };
  return record(std::move(node));
}

Tensor Graph::sum(const Tensor& a) {
  detail::TensorNode node;
  node.shape = {};
  node.values = {std::accumulate(a.values().begin(), a.values().end(), 0.0)};
  auto pa = a.node_;
  node.parents = {pa};
  node.backprop = [pa](detail::TensorNode& self) {
    for (double& g : pa->grad) g += self.grad[0];
  };
  return record(std::move(node));
}

Tensor Graph::mean(const Tensor& a) {
  const double inv = 1.0 / static_cast<double>(a.size());
  detail::TensorNode node;
  node.shape = {};
  node.values = {std::accumulate(a.values().begin(), a.values().end(), 0.0) * inv};
  auto pa = a.node_;
  node.parents = {pa};
  node.backprop = [inv, pa](detail::TensorNode& self) {
    for (double& g : pa->grad) g += self.grad[0] * inv;
  };
  return record(std::move(node));
}

Tensor Graph::row_sums(const Tensor& a) {
  const int m = a.rows(), n = a.cols();
  detail::TensorNode node;
  node.shape = {m};
  node.values.assign(static_cast<size_t>(m), 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) node.values[i] += a.values()[static_cast<size_t>(i) * n + j];
  auto pa = a.node_;
  node.parents = {pa};
  node.backprop = [m, n, pa](detail::TensorNode& self) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) pa->grad[static_cast<size_t>(i) * n + j] += self.grad[i];
  };
  return record(std::move(node));
}

Tensor Graph::col_sums(const Tensor& a) {
  const int m = a.rows(), n = a.cols();
  detail::TensorNode node;
  node.shape = {n};
  node.values.assign(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) node.values[j] += a.values()[static_cast<size_t>(i) * n + j];
  auto pa = a.node_;
  node.parents = {pa};
  node.backprop = [m, n, pa](detail::TensorNode& self) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) pa->grad[static_cast<size_t>(i) * n + j] += self.grad[j];
  };
  return record(std::move(node));
}

Tensor Graph::outer(const Tensor& u, const Tensor& v) {
  check(u.shape().size() == 1 && v.shape().size() == 1, "outer: rank-1 operands required");
  const int m = u.size(), n = v.size();
  detail::TensorNode node;
  node.shape = {m, n};
  node.values.resize(static_cast<size_t>(m) * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      node.values[static_cast<size_t>(i) * n + j] = u.values()[i] * v.values()[j];
  auto pu = u.node_, pv = v.node_;
  node.parents = {pu, pv};
  node.backprop = [m, n, pu, pv](detail::TensorNode& self) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        double g = self.grad[static_cast<size_t>(i) * n + j];
        pu->grad[i] += g * pv->values[j];
        pv->grad[j] += g * pu->values[i];
      }
  };
  return record(std::move(node));
}

int Graph::backward(const Tensor& loss) {
  check(loss.defined() && loss.size() == 1, "backward: loss must be a scalar");
  check(!backward_done_, "backward: graph already differentiated; graphs are single-use");
  check(!tape_.empty() && loss.node_->node_id >= 0, "backward: loss was not produced by this graph");
  backward_done_ = true;

  loss.node_->grad[0] = 1.0;
  int processed = 0;
  for (auto it = tape_.rbegin(); it != tape_.rend(); ++it) {
    (*it)->backprop(**it);
    ++processed;
  }
  return processed;
}

void sgd_step(std::vector<Tensor>& params, double lr) {
  for (Tensor& p : params) {
    auto& v = p.values();
    auto& g = p.grad();
    for (size_t i = 0; i < v.size(); ++i) v[i] -= lr * g[i];
    std::fill(g.begin(), g.end(), 0.0);
  }
}

}  // namespace semisup
