#include "semisup/augment.hpp"

#include <algorithm>
#include <cmath>

#include "semisup/check.hpp"

namespace semisup {

namespace {

constexpr uint64_t kAugmentTag = 201;

inline int clamp_idx(int v, int hi) { return std::min(std::max(v, 0), hi - 1); }

// planar (c, y, x)
inline size_t at(const PayloadGeom& g, int c, int y, int x) {
  return (static_cast<size_t>(c) * g.height + y) * g.width + x;
}

void hflip(std::vector<double>& img, const PayloadGeom& g) {
  for (int c = 0; c < g.channels; ++c)
    for (int y = 0; y < g.height; ++y)
      for (int x = 0; x < g.width / 2; ++x)
        std::swap(img[at(g, c, y, x)], img[at(g, c, y, g.width - 1 - x)]);
}

void shift(std::vector<double>& img, const PayloadGeom& g, int dx, int dy) {
  if (dx == 0 && dy == 0) return;
  std::vector<double> src = img;
  for (int c = 0; c < g.channels; ++c)
    for (int y = 0; y < g.height; ++y)
      for (int x = 0; x < g.width; ++x)
        img[at(g, c, y, x)] =
            src[at(g, c, clamp_idx(y - dy, g.height), clamp_idx(x - dx, g.width))];
}

// Nearest-neighbour inverse warp around the image centre; edge-clamped.
void warp(std::vector<double>& img, const PayloadGeom& g, double m00, double m01,
          double m10, double m11) {
  std::vector<double> src = img;
  const double cx = g.width / 2.0, cy = g.height / 2.0;
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      double px = x + 0.5 - cx, py = y + 0.5 - cy;
      double sx = m00 * px + m01 * py + cx;
      double sy = m10 * px + m11 * py + cy;
      int ix = clamp_idx(static_cast<int>(std::floor(sx)), g.width);
      int iy = clamp_idx(static_cast<int>(std::floor(sy)), g.height);
      for (int c = 0; c < g.channels; ++c) img[at(g, c, y, x)] = src[at(g, c, iy, ix)];
    }
  }
}

void apply_strong_op(std::vector<double>& img, const PayloadGeom& g, int op, double m,
                     Rng& rng) {
  // Parameter draws happen unconditionally so the stream layout does not
  // depend on the magnitude; every op is the identity at m == 0.
  switch (op) {
    case 0: {  // invert blend
      if (m <= 0) return;
      for (double& v : img) v = (1 - m) * v + m * (1 - v);
      return;
    }
    case 1: {  // contrast
      double u = rng.uniform(-0.8, 0.8);
      if (m <= 0) return;
      double f = 1.0 + m * u;
      for (double& v : img) v = 0.5 + f * (v - 0.5);
      return;
    }
    case 2: {  // brightness
      double u = rng.uniform(-0.4, 0.4);
      if (m <= 0) return;
      for (double& v : img) v += m * u;
      return;
    }
    case 3: {  // rotation, up to +-30 degrees
      double theta = m * rng.uniform(-1.0, 1.0) * (M_PI / 6.0);
      if (m <= 0) return;
      double c = std::cos(-theta), s = std::sin(-theta);
      warp(img, g, c, -s, s, c);
      return;
    }
    case 4: {  // horizontal shear
      double sh = m * rng.uniform(-0.3, 0.3);
      if (m <= 0) return;
      warp(img, g, 1.0, sh, 0.0, 1.0);
      return;
    }
    case 5: {  // solarize: invert above threshold
      if (m <= 0) return;
      double t = 1.0 - 0.5 * m;
      for (double& v : img)
        if (v > t) v = 1.0 - v;
      return;
    }
    default: {  // posterize
      if (m <= 0) return;
      int levels = static_cast<int>(std::lround(256.0 - m * 252.0));
      double steps = static_cast<double>(levels - 1);
      for (double& v : img) v = std::round(v * steps) / steps;
      return;
    }
  }
}

void cutout(std::vector<double>& img, const PayloadGeom& g, double fraction, Rng& rng) {
  int side = static_cast<int>(std::floor(fraction * std::min(g.width, g.height)));
  if (side < 1) return;
  int x0 = rng.uniform_int(0, g.width - side);
  int y0 = rng.uniform_int(0, g.height - side);
  for (int c = 0; c < g.channels; ++c)
    for (int y = y0; y < y0 + side; ++y)
      for (int x = x0; x < x0 + side; ++x) img[at(g, c, y, x)] = 0.5;
}

}  // namespace

AugmentPolicy AugmentPolicy::weak_default() {
  AugmentPolicy p;
  p.kind = Kind::weak;
  return p;
}

AugmentPolicy AugmentPolicy::strong_default() {
  AugmentPolicy p;
  p.kind = Kind::strong;
  return p;
}

Rng view_rng(uint64_t seed, int epoch, int sample_id, View view) {
  return Rng(stream_seed(seed, {kAugmentTag, static_cast<uint64_t>(epoch),
                                static_cast<uint64_t>(sample_id),
                                static_cast<uint64_t>(view)}));
}

std::vector<double> augment(const std::vector<double>& payload, const PayloadGeom& geom,
                            const AugmentPolicy& policy, Rng& rng) {
  std::vector<double> out = payload;

  if (geom.is_image()) {
    check(static_cast<size_t>(geom.width) * geom.height * geom.channels == payload.size(),
          "augment: payload does not match geometry");
    if (policy.kind == AugmentPolicy::Kind::weak) {
      bool flip = rng.bernoulli(policy.flip_prob);
      int sx = static_cast<int>(std::floor(policy.shift_fraction * geom.width));
      int sy = static_cast<int>(std::floor(policy.shift_fraction * geom.height));
      int dx = sx > 0 ? rng.uniform_int(-sx, sx) : 0;
      int dy = sy > 0 ? rng.uniform_int(-sy, sy) : 0;
      if (flip) hflip(out, geom);
      shift(out, geom, dx, dy);
    } else {
      for (int k = 0; k < policy.ops_per_sample; ++k) {
        int op = rng.uniform_int(0, 6);
        apply_strong_op(out, geom, op, policy.magnitude, rng);
      }
      cutout(out, geom, policy.cutout_fraction, rng);
    }
  } else {
    if (policy.kind == AugmentPolicy::Kind::weak) {
      for (double& v : out) v += rng.normal(0.0, policy.noise_sigma);
    } else {
      for (double& v : out)
        if (rng.bernoulli(policy.dropout_prob)) v = 0.0;
      for (double& v : out) v *= rng.uniform(1.0 - policy.scale_jitter, 1.0 + policy.scale_jitter);
    }
  }

  for (double& v : out) v = std::clamp(v, 0.0, 1.0);
  return out;
}

}  // namespace semisup
