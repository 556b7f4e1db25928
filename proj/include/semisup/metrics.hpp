#pragma once

#include <vector>

namespace semisup {

struct ProxyStats {
  double coverage = 0;         // fraction of samples with proxy != -1
  double precision_all = 0;    // correct proxies over ALL samples
  double precision_valid = 0;  // correct proxies over non-ignored proxies
};

// Identity: precision_all == precision_valid * coverage.
ProxyStats proxy_stats(const std::vector<int>& proxies, const std::vector<int>& truths);

// Fraction of argmax predictions equal to the truth. probs is row-major
// [n, class_count].
double accuracy(const std::vector<double>& probs, int class_count,
                const std::vector<int>& truths);

// Majority-vote alignment: each cluster maps to the majority true class among
// its held-out members. Empty clusters map to the global majority class;
// *had_empty reports whether that fallback fired. The result is a map, not
// necessarily a permutation.
std::vector<int> align_clusters_majority(const std::vector<int>& clusters,
                                         const std::vector<int>& labels, int class_count,
                                         bool* had_empty = nullptr);

// Hungarian assignment on the cluster-label co-occurrence counts; maximizes
// total matched mass. Secondary diagnostic for purely unsupervised runs.
std::vector<int> align_clusters_hungarian(const std::vector<int>& clusters,
                                          const std::vector<int>& labels, int class_count);

}  // namespace semisup
