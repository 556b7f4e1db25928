#include "semisup/memory_bank.hpp"

#include <algorithm>

#include "semisup/check.hpp"

namespace semisup {

MemoryBank::MemoryBank(int class_count, int k)
    : rows_(static_cast<size_t>(class_count)), k_(k) {
  check_config(class_count >= 1, "bank: class_count must be >= 1");
  check_config(k >= 0, "bank: k must be >= 0");
}

int MemoryBank::capacity_for(int labeled_count, int class_count) {
  check(class_count >= 1, "bank: class_count must be >= 1");
  return (labeled_count / class_count) * 2;
}

bool MemoryBank::beats(double conf_a, int id_a, double conf_b, int id_b) {
  if (conf_a != conf_b) return conf_a > conf_b;
  return id_a > id_b;
}

void MemoryBank::offer(int sample_id, int predicted_class, double confidence) {
  check(predicted_class >= 0 && predicted_class < class_count(),
        "bank: predicted class out of range");
  check(confidence >= 0.0 && confidence <= 1.0, "bank: confidence outside [0,1]");
  if (k_ == 0) return;
  auto& row = rows_[static_cast<size_t>(predicted_class)];

  for (Rec& r : row) {
    if (r.id == sample_id) {
      r.conf = std::max(r.conf, confidence);
      return;
    }
  }
  if (static_cast<int>(row.size()) < k_) {
    row.push_back({sample_id, confidence});
    return;
  }
  size_t weakest = 0;
  for (size_t i = 1; i < row.size(); ++i)
    if (beats(row[weakest].conf, row[weakest].id, row[i].conf, row[i].id)) weakest = i;
  if (beats(confidence, sample_id, row[weakest].conf, row[weakest].id))
    row[weakest] = {sample_id, confidence};
}

std::vector<MemoryBank::Entry> MemoryBank::harvest() {
  std::vector<Entry> out;
  for (int cls = 0; cls < class_count(); ++cls) {
    auto& row = rows_[static_cast<size_t>(cls)];
    std::sort(row.begin(), row.end(), [](const Rec& a, const Rec& b) {
      return beats(a.conf, a.id, b.conf, b.id);
    });
    for (const Rec& r : row) out.push_back({r.id, cls, r.conf});
    row.clear();
  }
  return out;
}

int MemoryBank::total_size() const {
  int n = 0;
  for (const auto& row : rows_) n += static_cast<int>(row.size());
  return n;
}

}  // namespace semisup
