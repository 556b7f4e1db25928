#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace semisup {

// One example. Payload is a flat [0,1] vector; for images it is planar
// channel-major (c, y, x). label == -1 means hidden (unlabeled view).
struct Sample {
  int id = 0;
  int label = -1;
  std::vector<double> payload;
};

struct Dataset {
  enum class Kind { shapes, blobs, idx_image };

  Kind kind = Kind::blobs;
  int class_count = 0;
  // Image geometry; width == 0 means flat vector data.
  int width = 0, height = 0, channels = 0;
  int dim = 0;  // payload length
  std::vector<Sample> samples;

  bool is_image() const { return width > 0; }
};

enum class ShapeVariant { border_color, fill_color };

// Fig-style synthetic raster task: circles / triangles / pentagons at random
// position, scale and orientation, with a random hue applied either to the
// outline or to the whole fill. No anti-aliasing.
Dataset gen_shapes(int n_per_class, int size, ShapeVariant variant, uint64_t seed);

// Isotropic Gaussian clusters with pairwise center distance >= separation,
// clamped to the unit box.
Dataset gen_blobs(int n_per_class, int class_count, int dim, double separation,
                  double sigma, uint64_t seed);

// IDX image/label pair (big-endian, magic 0x803 / 0x801). Pixel values are
// scaled to [0,1]; errors carry the byte offset of the problem.
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

struct SplitSpec {
  int labels_per_class = 4;
  double test_fraction = 0.2;
  uint64_t seed = 1;
  // FixMatch-style selection: labeled samples also appear in the unlabeled pool.
  bool unlabeled_includes_labeled = true;
};

struct Split {
  std::vector<Sample> labeled;
  std::vector<Sample> unlabeled;      // labels stripped to -1
  std::vector<int> unlabeled_truth;   // parallel to `unlabeled`; metrics only
  std::vector<Sample> test;
};

// Class-balanced labeled subset, disjoint test split, remainder unlabeled.
Split split_dataset(const Dataset& ds, const SplitSpec& spec);

}  // namespace semisup
