#pragma once

#include "semisup/tensor.hpp"

namespace semisup {

// Joint class-class distribution of a prediction batch pair: the averaged
// outer product of row-stochastic predictions, symmetrized to (P + P^T)/2,
// with its marginals. Everything stays on the graph, so mutual information
// computed from it is differentiable back to the predictions.
struct JointDistribution {
  Tensor p;             // [C, C]
  Tensor row_marginal;  // [C]
  Tensor col_marginal;  // [C]
};

JointDistribution joint_distribution(Graph& g, const Tensor& pa, const Tensor& pb,
                                     bool symmetrize = true);

// I = sum_ij P_ij log(P_ij / (r_i c_j)), logs clamped at 1e-12.
Tensor mutual_information(Graph& g, const JointDistribution& j);

// Average of the three pairwise informations among the original, weak and
// strong views, negated: L = -(1/3) (I(u;w) + I(u;s) + I(w;s)).
Tensor triplet_mi_loss(Graph& g, const Tensor& pu, const Tensor& pw, const Tensor& ps,
                       bool symmetrize_each = true);

// Single-pair baseline: L = -I(pa; pb).
Tensor single_pair_mi_loss(Graph& g, const Tensor& pa, const Tensor& pb,
                           bool symmetrize = true);

}  // namespace semisup
