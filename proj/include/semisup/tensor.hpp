#pragma once

#include <functional>
#include <memory>
#include <vector>

namespace semisup {

class Graph;

namespace detail {

struct TensorNode {
  std::vector<int> shape;       // {} scalar, {n} vector, {m,n} matrix
  std::vector<double> values;
  std::vector<double> grad;     // same length as values
  std::vector<std::shared_ptr<TensorNode>> parents;
  std::function<void(TensorNode&)> backprop;  // scatters node.grad into parents
  int node_id = -1;             // insertion index on the owning graph's tape; -1 for free leaves
};

}  // namespace detail

// Value-semantics handle to a node. Leaves created via Tensor::variable()
// persist across graphs (model parameters); op results are recorded on the
// tape of the Graph that produced them.
class Tensor {
 public:
  Tensor() = default;

  static Tensor variable(std::vector<int> shape);  // zero-filled
  static Tensor variable(std::vector<int> shape, std::vector<double> values);
  static Tensor scalar(double v);

  bool defined() const { return node_ != nullptr; }
  const std::vector<int>& shape() const;
  int size() const;  // element count (1 for scalars)
  int rows() const;
  int cols() const;

  std::vector<double>& values();
  const std::vector<double>& values() const;
  std::vector<double>& grad();
  const std::vector<double>& grad() const;

  double value() const;          // scalar read; size() must be 1
  double at(int i, int j) const; // rank-2 read
  void zero_grad();

 private:
  friend class Graph;
  explicit Tensor(std::shared_ptr<detail::TensorNode> node) : node_(std::move(node)) {}
  std::shared_ptr<detail::TensorNode> node_;
};

// Define-by-run tape. Ops append result nodes in execution order; backward()
// seeds d(loss)/d(loss) = 1 and walks the tape in exact reverse insertion
// order, running each node's backprop once. A graph is single-use: one
// forward build, one backward pass.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  // out[i,j] = sum_k x[i,k] * w[k,j] + b[j]
  Tensor affine(const Tensor& x, const Tensor& w, const Tensor& b);
  Tensor matmul(const Tensor& a, const Tensor& b);
  Tensor transpose(const Tensor& a);

  Tensor add(const Tensor& a, const Tensor& b);
  Tensor sub(const Tensor& a, const Tensor& b);
  Tensor mul(const Tensor& a, const Tensor& b);  // elementwise
  Tensor div(const Tensor& a, const Tensor& b);  // elementwise
  Tensor scale(const Tensor& a, double k);

  Tensor relu(const Tensor& a);
  // log(max(a, 1e-12)); derivative 0 in the clamped region.
  Tensor log_clamped(const Tensor& a);
  // Row-stochastic softmax with row-max subtraction. Rejects non-finite input.
  Tensor softmax_rows(const Tensor& z);

  Tensor sum(const Tensor& a);   // -> scalar
  Tensor mean(const Tensor& a);  // -> scalar
  Tensor row_sums(const Tensor& a);  // [m,n] -> [m]
  Tensor col_sums(const Tensor& a);  // [m,n] -> [n]
  Tensor outer(const Tensor& u, const Tensor& v);  // [m],[n] -> [m,n]

  // Gradient of `loss` w.r.t. every node and leaf reachable from the tape.
  // Returns the number of tape nodes processed (each exactly once).
  int backward(const Tensor& loss);

  int node_count() const { return static_cast<int>(tape_.size()); }
  bool backward_done() const { return backward_done_; }

  static constexpr double kLogClamp = 1e-12;

 private:
  Tensor record(detail::TensorNode node);
  std::vector<std::shared_ptr<detail::TensorNode>> tape_;
  bool backward_done_ = false;
};

// p <- p - lr * grad(p), then grad zeroed.
void sgd_step(std::vector<Tensor>& params, double lr);

}  // namespace semisup
