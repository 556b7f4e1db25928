#include "semisup/metrics.hpp"

#include <algorithm>
#include <limits>

#include "semisup/check.hpp"

namespace semisup {

ProxyStats proxy_stats(const std::vector<int>& proxies, const std::vector<int>& truths) {
  check(!proxies.empty(), "proxy_stats: empty input");
  check(proxies.size() == truths.size(), "proxy_stats: length mismatch");

  int valid = 0, correct = 0;
  for (size_t i = 0; i < proxies.size(); ++i) {
    if (proxies[i] < 0) continue;
    ++valid;
    if (proxies[i] == truths[i]) ++correct;
  }
  ProxyStats s;
  double n = static_cast<double>(proxies.size());
  s.coverage = valid / n;
  s.precision_all = correct / n;
  s.precision_valid = valid > 0 ? static_cast<double>(correct) / valid : 0.0;
  return s;
}

double accuracy(const std::vector<double>& probs, int class_count,
                const std::vector<int>& truths) {
  check(!truths.empty(), "accuracy: empty input");
  check(probs.size() == truths.size() * static_cast<size_t>(class_count),
        "accuracy: probs size mismatch");
  int correct = 0;
  for (size_t i = 0; i < truths.size(); ++i) {
    const double* row = probs.data() + i * static_cast<size_t>(class_count);
    int arg = 0;
    for (int j = 1; j < class_count; ++j)
      if (row[j] > row[arg]) arg = j;
    if (arg == truths[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(truths.size());
}

namespace {

std::vector<std::vector<int>> cooccurrence(const std::vector<int>& clusters,
                                           const std::vector<int>& labels, int c) {
  check(clusters.size() == labels.size(), "align: length mismatch");
  check(!clusters.empty(), "align: empty input");
  std::vector<std::vector<int>> count(static_cast<size_t>(c),
                                      std::vector<int>(static_cast<size_t>(c), 0));
  for (size_t i = 0; i < clusters.size(); ++i) {
    check(clusters[i] >= 0 && clusters[i] < c, "align: cluster index out of range");
    check(labels[i] >= 0 && labels[i] < c, "align: label out of range");
    count[static_cast<size_t>(clusters[i])][static_cast<size_t>(labels[i])]++;
  }
  return count;
}

}  // namespace

std::vector<int> align_clusters_majority(const std::vector<int>& clusters,
                                         const std::vector<int>& labels, int class_count,
                                         bool* had_empty) {
  auto count = cooccurrence(clusters, labels, class_count);

  std::vector<int> global(static_cast<size_t>(class_count), 0);
  for (int lbl : labels) global[static_cast<size_t>(lbl)]++;
  int global_majority =
      static_cast<int>(std::max_element(global.begin(), global.end()) - global.begin());

  if (had_empty) *had_empty = false;
  std::vector<int> map(static_cast<size_t>(class_count));
  for (int k = 0; k < class_count; ++k) {
    const auto& row = count[static_cast<size_t>(k)];
    int total = 0;
    for (int v : row) total += v;
    if (total == 0) {
      map[static_cast<size_t>(k)] = global_majority;
      if (had_empty) *had_empty = true;
      continue;
    }
    map[static_cast<size_t>(k)] =
        static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return map;
}

namespace {

// Potentials form of the Hungarian algorithm; minimizes total cost over a
// perfect matching of an n x n matrix. Returns row -> column.
std::vector<int> hungarian_min(const std::vector<std::vector<double>>& a) {
  const int n = static_cast<int>(a.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      int i0 = p[j0], j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(static_cast<size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] != 0) row_to_col[static_cast<size_t>(p[j] - 1)] = j - 1;
  return row_to_col;
}

}  // namespace

std::vector<int> align_clusters_hungarian(const std::vector<int>& clusters,
                                          const std::vector<int>& labels, int class_count) {
  auto count = cooccurrence(clusters, labels, class_count);
  std::vector<std::vector<double>> cost(static_cast<size_t>(class_count),
                                        std::vector<double>(static_cast<size_t>(class_count)));
  for (int i = 0; i < class_count; ++i)
    for (int j = 0; j < class_count; ++j)
      cost[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          -static_cast<double>(count[static_cast<size_t>(i)][static_cast<size_t>(j)]);
  return hungarian_min(cost);
}

}  // namespace semisup
