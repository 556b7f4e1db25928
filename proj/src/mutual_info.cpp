#include "semisup/mutual_info.hpp"

#include "semisup/check.hpp"

namespace semisup {

JointDistribution joint_distribution(Graph& g, const Tensor& pa, const Tensor& pb,
                                     bool symmetrize) {
  check(pa.shape().size() == 2 && pb.shape().size() == 2,
        "joint_distribution: prediction batches must be matrices");
  check(pa.rows() == pb.rows() && pa.cols() == pb.cols(),
        "joint_distribution: batches must be aligned");
  check(pa.rows() >= 1, "joint_distribution: empty batch");

  const int batch = pa.rows();
  Tensor p = g.scale(g.matmul(g.transpose(pa), pb), 1.0 / batch);
  if (symmetrize) p = g.scale(g.add(p, g.transpose(p)), 0.5);

  JointDistribution j;
  j.p = p;
  j.row_marginal = g.row_sums(p);
  j.col_marginal = g.col_sums(p);
  return j;
}

Tensor mutual_information(Graph& g, const JointDistribution& j) {
  Tensor marginal_product = g.outer(j.row_marginal, j.col_marginal);
  Tensor log_ratio = g.sub(g.log_clamped(j.p), g.log_clamped(marginal_product));
  return g.sum(g.mul(j.p, log_ratio));
}

Tensor triplet_mi_loss(Graph& g, const Tensor& pu, const Tensor& pw, const Tensor& ps,
                       bool symmetrize_each) {
  check(pu.rows() == pw.rows() && pw.rows() == ps.rows(),
        "triplet_mi_loss: the three view batches must be aligned");
  Tensor i_uw = mutual_information(g, joint_distribution(g, pu, pw, symmetrize_each));
  Tensor i_us = mutual_information(g, joint_distribution(g, pu, ps, symmetrize_each));
  Tensor i_ws = mutual_information(g, joint_distribution(g, pw, ps, symmetrize_each));
  return g.scale(g.add(g.add(i_uw, i_us), i_ws), -1.0 / 3.0);
}

Tensor single_pair_mi_loss(Graph& g, const Tensor& pa, const Tensor& pb, bool symmetrize) {
  return g.scale(mutual_information(g, joint_distribution(g, pa, pb, symmetrize)), -1.0);
}

}  // namespace semisup
