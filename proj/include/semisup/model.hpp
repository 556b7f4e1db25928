#pragma once

#include <cstdint>
#include <vector>

#include "semisup/tensor.hpp"

namespace semisup {

struct ModelConfig {
  int input_dim = 0;
  std::vector<int> hidden = {256};  // widths before the feature layer
  int feature_dim = 128;
  int class_count = 0;
  uint64_t init_seed = 1;
  // Feature taken after the last hidden nonlinearity by default; flag flips
  // to the pre-activation value.
  bool features_after_relu = true;
};

// Small multilayer classifier. forward() yields both the penultimate feature
// embedding (the template-matching space) and the class distribution.
class Mlp {
 public:
  explicit Mlp(const ModelConfig& cfg);

  struct GraphOut {
    Tensor features;  // [B, F]
    Tensor probs;     // [B, C]
  };
  // Differentiable forward on a fresh or shared graph. batch is row-major [rows, D].
  GraphOut forward(Graph& g, const std::vector<double>& batch, int rows) const;

  struct EvalOut {
    std::vector<double> features;  // [rows, F]
    std::vector<double> probs;     // [rows, C]
  };
  // Plain inference pass; builds no gradient graph.
  EvalOut infer(const std::vector<double>& batch, int rows) const;
  // Inference with externally supplied parameter values (EMA shadow).
  EvalOut infer_with(const std::vector<std::vector<double>>& values,
                     const std::vector<double>& batch, int rows) const;

  // Parameters in fixed order: W0, b0, W1, b1, ...
  std::vector<Tensor>& params() { return params_; }
  const std::vector<Tensor>& params() const { return params_; }
  const ModelConfig& config() const { return cfg_; }

 private:
  ModelConfig cfg_;
  std::vector<int> widths_;      // input_dim, hidden..., feature_dim, class_count
  std::vector<Tensor> params_;
};

// Shadow copy updated as s <- decay*s + (1-decay)*p; used only for evaluation.
struct EmaState {
  double decay = 0.999;
  std::vector<std::vector<double>> shadow;

  void init_from(const Mlp& model);
  void update(const Mlp& model);
};

// Evaluation forward through the EMA shadow parameters.
Mlp::EvalOut predict_eval(const Mlp& model, const EmaState& ema,
                          const std::vector<double>& batch, int rows);

}  // namespace semisup
