#include "semisup/template_pool.hpp"

#include <cmath>

#include "semisup/binary_io.hpp"
#include "semisup/check.hpp"

namespace semisup {

FeaturePool::FeaturePool(int class_count, int capacity, int feature_dim)
    : class_count_(class_count),
      capacity_(capacity),
      feature_dim_(feature_dim),
      queues_(static_cast<size_t>(class_count)),
      centers_(static_cast<size_t>(class_count)),
      dirty_(static_cast<size_t>(class_count), true) {
  check_config(class_count >= 1, "pool: class_count must be >= 1");
  check_config(capacity >= 1, "pool: capacity must be >= 1");
  check_config(feature_dim >= 1, "pool: feature_dim must be >= 1");
}

int FeaturePool::capacity_for(int labels_per_class) {
  check(labels_per_class >= 1, "pool: labels_per_class must be >= 1");
  return 5 * labels_per_class;
}

void FeaturePool::push(int cls, std::vector<double> feature) {
  check(cls >= 0 && cls < class_count_, "pool: class out of range");
  check(static_cast<int>(feature.size()) == feature_dim_, "pool: feature length mismatch");
  auto& q = queues_[static_cast<size_t>(cls)];
  q.push_back(std::move(feature));
  if (static_cast<int>(q.size()) > capacity_) q.pop_front();  // oldest out
  dirty_[static_cast<size_t>(cls)] = true;
}

int FeaturePool::size(int cls) const {
  check(cls >= 0 && cls < class_count_, "pool: class out of range");
  return static_cast<int>(queues_[static_cast<size_t>(cls)].size());
}

bool FeaturePool::warmed() const {
  for (const auto& q : queues_)
    if (q.empty()) return false;
  return true;
}

const std::vector<std::vector<double>>& FeaturePool::centers() const {
  for (int cls = 0; cls < class_count_; ++cls) {
    const auto& q = queues_[static_cast<size_t>(cls)];
    check(!q.empty(), "pool not warmed: class " + std::to_string(cls) +
                          " has no features; run a labeled pass first");
    if (!dirty_[static_cast<size_t>(cls)]) continue;
    auto& c = centers_[static_cast<size_t>(cls)];
    c.assign(static_cast<size_t>(feature_dim_), 0.0);
    for (const auto& f : q)
      for (int k = 0; k < feature_dim_; ++k) c[static_cast<size_t>(k)] += f[static_cast<size_t>(k)];
    for (double& v : c) v /= static_cast<double>(q.size());
    dirty_[static_cast<size_t>(cls)] = false;
  }
  return centers_;
}

FeaturePool::MatchResult FeaturePool::match(const std::vector<double>& feature) const {
  check(static_cast<int>(feature.size()) == feature_dim_, "pool: feature length mismatch");
  const auto& cs = centers();

  double f_norm = 0;
  for (double v : feature) f_norm += v * v;
  f_norm = std::sqrt(f_norm);

  MatchResult r;
  double best_sim = -2.0, best_dist = 0.0;
  for (int cls = 0; cls < class_count_; ++cls) {
    const auto& c = cs[static_cast<size_t>(cls)];
    double dot = 0, c_norm = 0, dist = 0;
    for (int k = 0; k < feature_dim_; ++k) {
      dot += feature[static_cast<size_t>(k)] * c[static_cast<size_t>(k)];
      c_norm += c[static_cast<size_t>(k)] * c[static_cast<size_t>(k)];
      double d = feature[static_cast<size_t>(k)] - c[static_cast<size_t>(k)];
      dist += d * d;
    }
    c_norm = std::sqrt(c_norm);
    double sim = (f_norm > 0 && c_norm > 0) ? dot / (f_norm * c_norm) : -1.0;
    if (sim > best_sim) {
      best_sim = sim;
      r.cosine_class = cls;
    }
    if (cls == 0 || dist < best_dist) {
      best_dist = dist;
      r.euclid_class = cls;
    }
  }
  r.cosine_sim = best_sim;
  return r;
}

int FeaturePool::assign_proxy(const std::vector<double>& feature, double tau) const {
  check(tau > 0.0 && tau < 1.0, "pool: tau must be in (0,1)");
  MatchResult m = match(feature);
  if (m.cosine_class == m.euclid_class && m.cosine_sim >= tau) return m.cosine_class;
  return -1;
}

void FeaturePool::save(std::ostream& os) const {
  io::write_i32(os, class_count_);
  io::write_i32(os, capacity_);
  io::write_i32(os, feature_dim_);
  for (const auto& q : queues_) {
    io::write_u64(os, q.size());
    for (const auto& f : q)
      os.write(reinterpret_cast<const char*>(f.data()),
               static_cast<std::streamsize>(f.size() * sizeof(double)));
  }
}

FeaturePool FeaturePool::load(std::istream& is) {
  int c = io::read_i32(is, "pool class count");
  int cap = io::read_i32(is, "pool capacity");
  int fd = io::read_i32(is, "pool feature dim");
  FeaturePool pool(c, cap, fd);
  for (int cls = 0; cls < c; ++cls) {
    uint64_t n = io::read_u64(is, "pool queue length");
    for (uint64_t i = 0; i < n; ++i) {
      std::vector<double> f(static_cast<size_t>(fd));
      is.read(reinterpret_cast<char*>(f.data()),
              static_cast<std::streamsize>(f.size() * sizeof(double)));
      check(static_cast<bool>(is), "pool: truncated feature data");
      pool.push(cls, std::move(f));
    }
  }
  return pool;
}

}  // namespace semisup
