#pragma once

#include <deque>
#include <istream>
#include <ostream>
#include <vector>

namespace semisup {

// Per-class bounded FIFO queues of feature vectors with lazily recomputed
// mean centers. Pushed features are detached values: no gradient flows
// through the pool.
class FeaturePool {
 public:
  FeaturePool(int class_count, int capacity, int feature_dim);

  // Queue length rule: 5x the per-class labeled count.
  static int capacity_for(int labels_per_class);

  void push(int cls, std::vector<double> feature);
  int size(int cls) const;
  int class_count() const { return class_count_; }
  int capacity() const { return capacity_; }
  int feature_dim() const { return feature_dim_; }
  bool warmed() const;  // every queue nonempty

  // Mean of each queue. Throws if any queue is empty ("pool not warmed"):
  // the trainer must seed the pool from a labeled pass before matching.
  const std::vector<std::vector<double>>& centers() const;

  struct MatchResult {
    int cosine_class = -1;   // argmax cosine similarity
    int euclid_class = -1;   // argmin Euclidean distance
    double cosine_sim = -1;  // similarity of the cosine winner
  };
  // Dual-metric match against the centers. Zero-norm feature or center
  // contributes similarity -1 for that class. Ties break to the lowest index.
  MatchResult match(const std::vector<double>& feature) const;

  // The agreement rule: cosine winner if both metrics agree and the winning
  // similarity reaches tau, otherwise -1 (ignored).
  int assign_proxy(const std::vector<double>& feature, double tau) const;

  void save(std::ostream& os) const;
  static FeaturePool load(std::istream& is);

 private:
  int class_count_, capacity_, feature_dim_;
  std::vector<std::deque<std::vector<double>>> queues_;
  mutable std::vector<std::vector<double>> centers_;
  mutable std::vector<bool> dirty_;
};

}  // namespace semisup
