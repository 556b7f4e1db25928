#pragma once

#include <cstdint>
#include <vector>

#include "semisup/data.hpp"
#include "semisup/rng.hpp"

namespace semisup {

// Weak = flip-and-shift; strong = a reduced random-op pool followed by cutout.
// Vector datasets use the additive-noise / dropout-and-jitter analogues.
struct AugmentPolicy {
  enum class Kind { weak, strong };
  Kind kind = Kind::weak;

  // weak, images
  double flip_prob = 0.5;
  double shift_fraction = 0.125;  // of width/height, integer pixels, edge-padded

  // strong, images
  int ops_per_sample = 2;
  double magnitude = 0.5;        // in [0,1]; 0 disables every pooled op
  double cutout_fraction = 0.5;  // of side length; region filled with 0.5 gray

  // vector analogues
  double noise_sigma = 0.05;     // weak: additive Gaussian
  double dropout_prob = 0.3;     // strong: feature dropout
  double scale_jitter = 0.3;     // strong: per-feature scale in [1-j, 1+j]

  static AugmentPolicy weak_default();
  static AugmentPolicy strong_default();
};

struct PayloadGeom {
  int width = 0, height = 0, channels = 0;
  bool is_image() const { return width > 0; }
  static PayloadGeom of(const Dataset& ds) { return {ds.width, ds.height, ds.channels}; }
};

// Pure given the rng stream; output clamped to [0,1].
std::vector<double> augment(const std::vector<double>& payload, const PayloadGeom& geom,
                            const AugmentPolicy& policy, Rng& rng);

// Stream id convention: one stream per (seed, epoch, sample id, view).
enum class View : uint64_t { original = 0, weak = 1, strong = 2 };
Rng view_rng(uint64_t seed, int epoch, int sample_id, View view);

}  // namespace semisup
