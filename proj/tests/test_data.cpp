#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "semisup/check.hpp"
#include "semisup/data.hpp"

using namespace semisup;

namespace {

std::string tmp_path(const std::string& name) {
  return std::string("/tmp/semisup_test_") + name;
}

void write_bytes(const std::string& path, const std::vector<unsigned char>& bytes) {
  std::ofstream os(path, std::ios::binary);
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
}

void append_be_u32(std::vector<unsigned char>& v, uint32_t x) {
  v.push_back(static_cast<unsigned char>(x >> 24));
  v.push_back(static_cast<unsigned char>(x >> 16));
  v.push_back(static_cast<unsigned char>(x >> 8));
  v.push_back(static_cast<unsigned char>(x));
}

// 4 images of 28x28 where image i is constant pixel value 10*i, labels 0..3.
struct IdxFixture {
  std::string images = tmp_path("idx_images");
  std::string labels = tmp_path("idx_labels");
  IdxFixture() {
    std::vector<unsigned char> img;
    append_be_u32(img, 0x00000803u);
    append_be_u32(img, 4);
    append_be_u32(img, 28);
    append_be_u32(img, 28);
    for (int i = 0; i < 4; ++i)
      for (int p = 0; p < 28 * 28; ++p) img.push_back(static_cast<unsigned char>(10 * i));
    write_bytes(images, img);

    std::vector<unsigned char> lbl;
    append_be_u32(lbl, 0x00000801u);
    append_be_u32(lbl, 4);
    for (int i = 0; i < 4; ++i) lbl.push_back(static_cast<unsigned char>(i));
    write_bytes(labels, lbl);
  }
};

}  // namespace

TEST_CASE("gen_shapes produces one sample per class and is seed-deterministic") {
  Dataset a = gen_shapes(1, 32, ShapeVariant::border_color, 9);
  CHECK(a.samples.size() == 3);
  CHECK(a.class_count == 3);
  CHECK(a.dim == 3 * 32 * 32);
  std::set<int> labels;
  for (const auto& s : a.samples) labels.insert(s.label);
  CHECK(labels == std::set<int>{0, 1, 2});

  Dataset b = gen_shapes(1, 32, ShapeVariant::border_color, 9);
  for (size_t i = 0; i < a.samples.size(); ++i)
    CHECK(a.samples[i].payload == b.samples[i].payload);

  Dataset c = gen_shapes(1, 32, ShapeVariant::border_color, 10);
  bool any_diff = false;
  for (size_t i = 0; i < a.samples.size() && !any_diff; ++i)
    any_diff = a.samples[i].payload != c.samples[i].payload;
  CHECK(any_diff);
}

TEST_CASE("gen_shapes payload stays in [0,1] for both variants") {
  for (ShapeVariant v : {ShapeVariant::border_color, ShapeVariant::fill_color}) {
    Dataset ds = gen_shapes(5, 32, v, 3);
    for (const auto& s : ds.samples)
      for (double p : s.payload) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
      }
  }
}

TEST_CASE("gen_shapes class-conditional mean images differ pairwise") {
  Dataset ds = gen_shapes(40, 32, ShapeVariant::border_color, 5);
  std::vector<std::vector<double>> mean(3, std::vector<double>(static_cast<size_t>(ds.dim), 0.0));
  std::vector<int> count(3, 0);
  for (const auto& s : ds.samples) {
    count[s.label]++;
    for (int k = 0; k < ds.dim; ++k) mean[s.label][k] += s.payload[k];
  }
  for (int c = 0; c < 3; ++c)
    for (int k = 0; k < ds.dim; ++k) mean[c][k] /= count[c];
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      double l2 = 0;
      for (int k = 0; k < ds.dim; ++k) l2 += (mean[a][k] - mean[b][k]) * (mean[a][k] - mean[b][k]);
      CHECK(std::sqrt(l2) > 0.0);
    }
}

TEST_CASE("gen_blobs: separated clusters are classified perfectly by nearest centroid") {
  Dataset ds = gen_blobs(30, 3, 16, 1.0, 0.01, 11);
  // centroid oracle from the data itself
  std::vector<std::vector<double>> centroid(3, std::vector<double>(16, 0.0));
  std::vector<int> count(3, 0);
  for (const auto& s : ds.samples) {
    count[s.label]++;
    for (int k = 0; k < 16; ++k) centroid[s.label][k] += s.payload[k];
  }
  for (int c = 0; c < 3; ++c)
    for (int k = 0; k < 16; ++k) centroid[c][k] /= count[c];
  for (const auto& s : ds.samples) {
    int best = -1;
    double best_d = 1e300;
    for (int c = 0; c < 3; ++c) {
      double d = 0;
      for (int k = 0; k < 16; ++k) d += (s.payload[k] - centroid[c][k]) * (s.payload[k] - centroid[c][k]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    CHECK(best == s.label);
  }
}

TEST_CASE("gen_blobs: C=1 gives a single label, seeds reproduce") {
  Dataset ds = gen_blobs(10, 1, 4, 0.5, 0.05, 2);
  for (const auto& s : ds.samples) CHECK(s.label == 0);
  Dataset ds2 = gen_blobs(10, 1, 4, 0.5, 0.05, 2);
  for (size_t i = 0; i < ds.samples.size(); ++i)
    CHECK(ds.samples[i].payload == ds2.samples[i].payload);
}

TEST_CASE("gen_blobs rejects impossible separation") {
  CHECK_THROWS_AS(gen_blobs(1, 5, 2, 50.0, 0.01, 1), ConfigError);
}

TEST_CASE("load_idx ingests the handcrafted 4-image fixture") {
  IdxFixture fx;
  Dataset ds = load_idx(fx.images, fx.labels);
  CHECK(ds.samples.size() == 4);
  CHECK(ds.width == 28);
  CHECK(ds.height == 28);
  CHECK(ds.dim == 784);
  for (int i = 0; i < 4; ++i) {
    CHECK(ds.samples[i].label == i);
    for (double p : ds.samples[i].payload)
      CHECK(p == doctest::Approx(10.0 * i / 255.0).epsilon(1e-15));
  }
}

TEST_CASE("load_idx rejects empty and corrupted files with positioned errors") {
  IdxFixture fx;

  write_bytes(tmp_path("idx_empty"), {});
  CHECK_THROWS_AS(load_idx(tmp_path("idx_empty"), fx.labels), IngestError);

  // wrong magic
  std::vector<unsigned char> bad;
  append_be_u32(bad, 0x00000802u);
  append_be_u32(bad, 1);
  append_be_u32(bad, 2);
  append_be_u32(bad, 2);
  for (int i = 0; i < 4; ++i) bad.push_back(0);
  write_bytes(tmp_path("idx_badmagic"), bad);
  CHECK_THROWS_WITH_AS(load_idx(tmp_path("idx_badmagic"), fx.labels),
                       doctest::Contains("bad magic at offset 0"), IngestError);

  // truncated pixel data
  std::vector<unsigned char> trunc;
  append_be_u32(trunc, 0x00000803u);
  append_be_u32(trunc, 4);
  append_be_u32(trunc, 28);
  append_be_u32(trunc, 28);
  for (int i = 0; i < 100; ++i) trunc.push_back(7);
  write_bytes(tmp_path("idx_trunc"), trunc);
  CHECK_THROWS_WITH_AS(load_idx(tmp_path("idx_trunc"), fx.labels),
                       doctest::Contains("truncated at offset"), IngestError);

  // count mismatch
  std::vector<unsigned char> lbl;
  append_be_u32(lbl, 0x00000801u);
  append_be_u32(lbl, 3);
  for (int i = 0; i < 3; ++i) lbl.push_back(0);
  write_bytes(tmp_path("idx_short_labels"), lbl);
  CHECK_THROWS_WITH_AS(load_idx(fx.images, tmp_path("idx_short_labels")),
                       doctest::Contains("count mismatch"), IngestError);

  // label out of range
  std::vector<unsigned char> lbl2;
  append_be_u32(lbl2, 0x00000801u);
  append_be_u32(lbl2, 4);
  lbl2.push_back(0);
  lbl2.push_back(1);
  lbl2.push_back(12);
  lbl2.push_back(3);
  write_bytes(tmp_path("idx_badlabel"), lbl2);
  CHECK_THROWS_WITH_AS(load_idx(fx.images, tmp_path("idx_badlabel")),
                       doctest::Contains("out of range 0..9"), IngestError);
}

TEST_CASE("dataset container round-trips bit-exactly") {
  Dataset ds = gen_shapes(2, 16, ShapeVariant::fill_color, 4);
  save_dataset(ds, tmp_path("container"));
  Dataset back = load_dataset(tmp_path("container"));
  CHECK(back.class_count == ds.class_count);
  CHECK(back.width == ds.width);
  CHECK(back.dim == ds.dim);
  REQUIRE(back.samples.size() == ds.samples.size());
  for (size_t i = 0; i < ds.samples.size(); ++i) {
    CHECK(back.samples[i].id == ds.samples[i].id);
    CHECK(back.samples[i].label == ds.samples[i].label);
    CHECK(back.samples[i].payload == ds.samples[i].payload);
  }
}

TEST_CASE("split: balanced labeled set, disjoint test, hidden unlabeled truth") {
  Dataset ds = gen_blobs(50, 3, 4, 0.8, 0.03, 21);
  SplitSpec spec;
  spec.labels_per_class = 4;
  spec.test_fraction = 0.2;
  spec.seed = 17;
  Split sp = split_dataset(ds, spec);

  CHECK(sp.labeled.size() == 12);
  CHECK(sp.test.size() == 30);  // 10 per class
  std::vector<int> per_class(3, 0);
  for (const auto& s : sp.labeled) per_class[s.label]++;
  for (int c = 0; c < 3; ++c) CHECK(per_class[c] == 4);

  // test ids disjoint from the rest
  std::set<int> test_ids, train_ids;
  for (const auto& s : sp.test) test_ids.insert(s.id);
  for (const auto& s : sp.labeled) train_ids.insert(s.id);
  for (const auto& s : sp.unlabeled) train_ids.insert(s.id);
  for (int id : test_ids) CHECK(train_ids.count(id) == 0);

  // unlabeled view carries no labels; parallel truth matches the dataset
  REQUIRE(sp.unlabeled.size() == sp.unlabeled_truth.size());
  for (size_t i = 0; i < sp.unlabeled.size(); ++i) {
    CHECK(sp.unlabeled[i].label == -1);
    CHECK(sp.unlabeled_truth[i] == ds.samples[sp.unlabeled[i].id].label);
  }

  // FixMatch-style inclusion: labeled ids also live in the unlabeled pool
  std::set<int> unlabeled_ids;
  for (const auto& s : sp.unlabeled) unlabeled_ids.insert(s.id);
  for (const auto& s : sp.labeled) CHECK(unlabeled_ids.count(s.id) == 1);
  CHECK(sp.unlabeled.size() == 120);  // everything that is not test

  // exclusion flag drops them
  spec.unlabeled_includes_labeled = false;
  Split sp2 = split_dataset(ds, spec);
  CHECK(sp2.unlabeled.size() == 108);

  // union covers the dataset when labeled are excluded from unlabeled
  std::set<int> all;
  for (const auto& s : sp2.test) all.insert(s.id);
  for (const auto& s : sp2.labeled) all.insert(s.id);
  for (const auto& s : sp2.unlabeled) all.insert(s.id);
  CHECK(all.size() == ds.samples.size());
}

TEST_CASE("split is deterministic under seed and rejects undersized classes") {
  Dataset ds = gen_blobs(50, 3, 4, 0.8, 0.03, 21);
  SplitSpec spec;
  spec.labels_per_class = 4;
  spec.test_fraction = 0.2;
  spec.seed = 5;
  Split a = split_dataset(ds, spec);
  Split b = split_dataset(ds, spec);
  REQUIRE(a.labeled.size() == b.labeled.size());
  for (size_t i = 0; i < a.labeled.size(); ++i) CHECK(a.labeled[i].id == b.labeled[i].id);
  for (size_t i = 0; i < a.unlabeled.size(); ++i) CHECK(a.unlabeled[i].id == b.unlabeled[i].id);
  for (size_t i = 0; i < a.test.size(); ++i) CHECK(a.test[i].id == b.test[i].id);

  spec.labels_per_class = 100;
  CHECK_THROWS_AS(split_dataset(ds, spec), ConfigError);
}
