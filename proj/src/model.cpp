#include "semisup/model.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "semisup/check.hpp"
#include "semisup/rng.hpp"

namespace semisup {

namespace {

constexpr uint64_t kInitTag = 301;

using MatrixRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

Mlp::Mlp(const ModelConfig& cfg) : cfg_(cfg) {
  check_config(cfg.input_dim >= 1, "model: input_dim must be >= 1");
  check_config(cfg.feature_dim >= 2, "model: feature_dim must be >= 2");
  check_config(cfg.class_count >= 2, "model: class_count must be >= 2");

  widths_.push_back(cfg.input_dim);
  for (int h : cfg.hidden) {
    check_config(h >= 1, "model: hidden width must be >= 1");
    widths_.push_back(h);
  }
  widths_.push_back(cfg.feature_dim);
  widths_.push_back(cfg.class_count);

  Rng rng(stream_seed(cfg.init_seed, {kInitTag}));
  for (size_t l = 0; l + 1 < widths_.size(); ++l) {
    int fan_in = widths_[l], fan_out = widths_[l + 1];
    double bound = std::sqrt(6.0 / (fan_in + fan_out));
    std::vector<double> w(static_cast<size_t>(fan_in) * fan_out);
    for (double& v : w) v = rng.uniform(-bound, bound);
    params_.push_back(Tensor::variable({fan_in, fan_out}, std::move(w)));
    params_.push_back(Tensor::variable({fan_out}));  // zero bias
  }
}

namespace {

// Payloads live in [0,1]; the first layer sees them centered. Keeps the
// initial softmax spread away from the MI loss's flat independence point.
std::vector<double> centered(std::vector<double> batch) {
  for (double& v : batch) v -= 0.5;
  return batch;
}

}  // namespace

Mlp::GraphOut Mlp::forward(Graph& g, const std::vector<double>& batch, int rows) const {
  check_config(static_cast<int>(batch.size()) == rows * cfg_.input_dim,
               "model: batch width disagrees with input_dim");
  const Tensor input = Tensor::variable({rows, cfg_.input_dim}, centered(batch));
  const size_t n_layers = params_.size() / 2;
  Tensor h = input;
  Tensor features;
  for (size_t l = 0; l < n_layers; ++l) {
    Tensor z = g.affine(h, params_[2 * l], params_[2 * l + 1]);
    if (l + 1 == n_layers) {
      // final linear head; probs over classes
      return {features, g.softmax_rows(z)};
    }
    Tensor a = g.relu(z);
    if (l + 2 == n_layers) features = cfg_.features_after_relu ? a : z;
    h = a;
  }
  check(false, "model: unreachable");
  return {};
}

namespace {

// z = x*W + b, relu optional; plain arithmetic, no tape
void affine_forward(const std::vector<double>& x, int rows, const std::vector<double>& w,
                    int in, int out, const std::vector<double>& b, std::vector<double>& z) {
  z.assign(static_cast<size_t>(rows) * out, 0.0);
  Eigen::Map<MatrixRM> zm(z.data(), rows, out);
  zm.noalias() = Eigen::Map<const MatrixRM>(x.data(), rows, in) *
                 Eigen::Map<const MatrixRM>(w.data(), in, out);
  zm.rowwise() += Eigen::Map<const Eigen::RowVectorXd>(b.data(), out);
}

}  // namespace

Mlp::EvalOut Mlp::infer_with(const std::vector<std::vector<double>>& values,
                             const std::vector<double>& batch, int rows) const {
  check_config(static_cast<int>(batch.size()) == rows * cfg_.input_dim,
               "model: batch width disagrees with input_dim");
  check(values.size() == params_.size(), "model: parameter set size mismatch");

  const size_t n_layers = params_.size() / 2;
  EvalOut out;
  std::vector<double> h = centered(batch);
  std::vector<double> z;
  for (size_t l = 0; l < n_layers; ++l) {
    int in = widths_[l], w_out = widths_[l + 1];
    affine_forward(h, rows, values[2 * l], in, w_out, values[2 * l + 1], z);
    if (l + 1 == n_layers) {
      // row-stable softmax
      out.probs.assign(z.size(), 0.0);
      for (int i = 0; i < rows; ++i) {
        const double* zr = z.data() + static_cast<size_t>(i) * w_out;
        double* pr = out.probs.data() + static_cast<size_t>(i) * w_out;
        double mx = zr[0];
        for (int j = 1; j < w_out; ++j) mx = std::max(mx, zr[j]);
        double s = 0;
        for (int j = 0; j < w_out; ++j) {
          pr[j] = std::exp(zr[j] - mx);
          s += pr[j];
        }
        for (int j = 0; j < w_out; ++j) pr[j] /= s;
      }
      return out;
    }
    std::vector<double> a = z;
    for (double& v : a) v = v > 0 ? v : 0;
    if (l + 2 == n_layers) out.features = cfg_.features_after_relu ? a : z;
    h = std::move(a);
  }
  check(false, "model: unreachable");
  return {};
}

Mlp::EvalOut Mlp::infer(const std::vector<double>& batch, int rows) const {
  std::vector<std::vector<double>> values;
  values.reserve(params_.size());
  for (const Tensor& p : params_) values.push_back(p.values());
  return infer_with(values, batch, rows);
}

void EmaState::init_from(const Mlp& model) {
  shadow.clear();
  for (const Tensor& p : model.params()) shadow.push_back(p.values());
}

void EmaState::update(const Mlp& model) {
  check(shadow.size() == model.params().size(), "ema: shadow not initialized");
  for (size_t i = 0; i < shadow.size(); ++i) {
    const auto& pv = model.params()[i].values();
    auto& sv = shadow[i];
    for (size_t k = 0; k < sv.size(); ++k) sv[k] = decay * sv[k] + (1.0 - decay) * pv[k];
  }
}

Mlp::EvalOut predict_eval(const Mlp& model, const EmaState& ema,
                          const std::vector<double>& batch, int rows) {
  check(!ema.shadow.empty(), "ema: state not initialized");
  return model.infer_with(ema.shadow, batch, rows);
}

}  // namespace semisup
