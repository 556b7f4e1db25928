#pragma once

#include <vector>

namespace semisup {

// Per-class top-K confidence records of unlabeled samples, harvested at epoch
// end to enlarge the feature pool's sample basis. One instance lives for one
// epoch. Ties in confidence break on the higher sample id, which makes the
// retained set independent of offer order.
class MemoryBank {
 public:
  MemoryBank(int class_count, int k);

  // K = floor(labeled_count / C) * 2
  static int capacity_for(int labeled_count, int class_count);

  // Insert if the row has room; otherwise replace the weakest entry when the
  // offer beats it. A repeated sample id keeps its best confidence.
  void offer(int sample_id, int predicted_class, double confidence);

  struct Entry {
    int sample_id;
    int pseudo_class;
    double confidence;
  };
  // All recorded entries (class ascending, confidence descending, id
  // descending); the bank is cleared for the next epoch.
  std::vector<Entry> harvest();

  int k() const { return k_; }
  int class_count() const { return static_cast<int>(rows_.size()); }
  int total_size() const;

 private:
  struct Rec {
    int id;
    double conf;
  };
  static bool beats(double conf_a, int id_a, double conf_b, int id_b);
  std::vector<std::vector<Rec>> rows_;
  int k_;
};

}  // namespace semisup
