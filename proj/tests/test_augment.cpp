#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "semisup/augment.hpp"
#include "semisup/data.hpp"
#include "semisup/rng.hpp"

using namespace semisup;

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double l2(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(d);
}

}  // namespace

TEST_CASE("weak with no flip and zero shift is the identity") {
  Dataset ds = gen_shapes(1, 32, ShapeVariant::border_color, 1);
  PayloadGeom g = PayloadGeom::of(ds);
  AugmentPolicy p = AugmentPolicy::weak_default();
  p.flip_prob = 0.0;
  p.shift_fraction = 0.0;
  Rng rng(1);
  CHECK(augment(ds.samples[0].payload, g, p, rng) == ds.samples[0].payload);
}

TEST_CASE("flip is an involution and preserves pixel mass") {
  Dataset ds = gen_shapes(2, 32, ShapeVariant::fill_color, 2);
  PayloadGeom g = PayloadGeom::of(ds);
  AugmentPolicy p = AugmentPolicy::weak_default();
  p.flip_prob = 1.0;  // always flip
  p.shift_fraction = 0.0;
  for (const auto& s : ds.samples) {
    Rng r1(7), r2(7);
    auto once = augment(s.payload, g, p, r1);
    CHECK(sum(once) == doctest::Approx(sum(s.payload)).epsilon(1e-12));
    Rng r3(9);
    auto twice = augment(once, g, p, r3);
    CHECK(twice == s.payload);
  }
}

TEST_CASE("strong with magnitude 0 and cutout 0 is the identity") {
  Dataset ds = gen_shapes(1, 32, ShapeVariant::border_color, 3);
  PayloadGeom g = PayloadGeom::of(ds);
  AugmentPolicy p = AugmentPolicy::strong_default();
  p.magnitude = 0.0;
  p.cutout_fraction = 0.0;
  Rng rng(11);
  CHECK(augment(ds.samples[0].payload, g, p, rng) == ds.samples[0].payload);
}

TEST_CASE("strong output stays in [0,1]") {
  Dataset ds = gen_shapes(4, 32, ShapeVariant::fill_color, 5);
  PayloadGeom g = PayloadGeom::of(ds);
  AugmentPolicy p = AugmentPolicy::strong_default();
  p.magnitude = 1.0;
  for (const auto& s : ds.samples)
    for (int rep = 0; rep < 20; ++rep) {
      Rng rng(static_cast<uint64_t>(s.id * 100 + rep));
      auto out = augment(s.payload, g, p, rng);
      for (double v : out) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
}

TEST_CASE("cutout on an all-ones image grays exactly floor(0.5*W)^2 pixels per channel") {
  PayloadGeom g{32, 32, 3};
  std::vector<double> ones(static_cast<size_t>(32) * 32 * 3, 1.0);
  AugmentPolicy p = AugmentPolicy::strong_default();
  p.ops_per_sample = 0;  // cutout only
  p.cutout_fraction = 0.5;
  Rng rng(13);
  auto out = augment(ones, g, p, rng);
  int grayed = 0;
  for (double v : out)
    if (v == 0.5) ++grayed;
  CHECK(grayed == 3 * 16 * 16);
}

TEST_CASE("same stream produces identical output; different stream differs") {
  Dataset ds = gen_shapes(1, 32, ShapeVariant::border_color, 8);
  PayloadGeom g = PayloadGeom::of(ds);
  AugmentPolicy p = AugmentPolicy::strong_default();
  Rng a = view_rng(42, 3, ds.samples[0].id, View::strong);
  Rng b = view_rng(42, 3, ds.samples[0].id, View::strong);
  CHECK(augment(ds.samples[0].payload, g, p, a) == augment(ds.samples[0].payload, g, p, b));

  Rng c = view_rng(42, 4, ds.samples[0].id, View::strong);
  CHECK(augment(ds.samples[0].payload, g, p, a) != augment(ds.samples[0].payload, g, p, c));
}

TEST_CASE("weak displaces less than strong in expectation on the shapes task") {
  Dataset ds = gen_shapes(34, 32, ShapeVariant::border_color, 6);  // >= 1000 draws over 102 images
  PayloadGeom g = PayloadGeom::of(ds);
  AugmentPolicy wp = AugmentPolicy::weak_default();
  AugmentPolicy sp = AugmentPolicy::strong_default();
  double weak_d = 0, strong_d = 0;
  int draws = 0;
  for (const auto& s : ds.samples)
    for (int rep = 0; rep < 10; ++rep) {
      Rng rw = view_rng(77, rep, s.id, View::weak);
      Rng rs = view_rng(77, rep, s.id, View::strong);
      weak_d += l2(augment(s.payload, g, wp, rw), s.payload);
      strong_d += l2(augment(s.payload, g, sp, rs), s.payload);
      ++draws;
    }
  CHECK(draws >= 1000);
  CHECK(weak_d / draws < strong_d / draws);
}

TEST_CASE("vector analogues: weak noise and strong dropout-jitter, clamped") {
  Dataset ds = gen_blobs(5, 2, 10, 0.4, 0.05, 3);
  PayloadGeom g = PayloadGeom::of(ds);
  AugmentPolicy wp = AugmentPolicy::weak_default();
  AugmentPolicy sp = AugmentPolicy::strong_default();
  Rng r1(5), r2(5);
  auto w = augment(ds.samples[0].payload, g, wp, r1);
  CHECK(w != ds.samples[0].payload);
  for (double v : w) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  auto s = augment(ds.samples[0].payload, g, sp, r2);
  int zeroed = 0;
  for (double v : s)
    if (v == 0.0) ++zeroed;
  CHECK(zeroed >= 1);  // dropout fired at least once in 10 features w.h.p.
}
