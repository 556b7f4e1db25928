#include "semisup/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "semisup/binary_io.hpp"
#include "semisup/check.hpp"
#include "semisup/rng.hpp"

namespace semisup {

namespace {

// rng stream purposes
constexpr uint64_t kShapesTag = 101;
constexpr uint64_t kBlobsTag = 102;
constexpr uint64_t kSplitTag = 103;

void hue_to_rgb(double h, double rgb[3]) {
  // HSV with s = v = 1
  double h6 = h * 6.0;
  int sector = static_cast<int>(h6) % 6;
  double f = h6 - std::floor(h6);
  switch (sector) {
    case 0: rgb[0] = 1; rgb[1] = f; rgb[2] = 0; break;
    case 1: rgb[0] = 1 - f; rgb[1] = 1; rgb[2] = 0; break;
    case 2: rgb[0] = 0; rgb[1] = 1; rgb[2] = f; break;
    case 3: rgb[0] = 0; rgb[1] = 1 - f; rgb[2] = 1; break;
    case 4: rgb[0] = f; rgb[1] = 0; rgb[2] = 1; break;
    default: rgb[0] = 1; rgb[1] = 0; rgb[2] = 1 - f; break;
  }
}

struct Shape {
  bool is_circle = false;
  double cx = 0, cy = 0, radius = 0;
  std::vector<double> vx, vy;  // polygon vertices

  bool contains(double x, double y) const {
    if (is_circle) {
      double dx = x - cx, dy = y - cy;
      return dx * dx + dy * dy <= radius * radius;
    }
    // even-odd crossing test
    bool inside = false;
    size_t n = vx.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
      if ((vy[i] > y) != (vy[j] > y)) {
        double t = (y - vy[i]) / (vy[j] - vy[i]);
        if (x < vx[i] + t * (vx[j] - vx[i])) inside = !inside;
      }
    }
    return inside;
  }

  Shape eroded(double t) const {
    Shape s = *this;
    if (is_circle) {
      s.radius = std::max(0.0, radius - t);
      return s;
    }
    double shrink = std::max(0.0, (radius - t) / radius);
    for (size_t i = 0; i < vx.size(); ++i) {
      s.vx[i] = cx + (vx[i] - cx) * shrink;
      s.vy[i] = cy + (vy[i] - cy) * shrink;
    }
    return s;
  }
};

Shape make_shape(int cls, int size, Rng& rng) {
  Shape s;
  s.radius = rng.uniform(0.20, 0.32) * size;
  s.cx = rng.uniform(0.38, 0.62) * size;
  s.cy = rng.uniform(0.38, 0.62) * size;
  if (cls == 0) {
    s.is_circle = true;
    return s;
  }
  int verts = cls == 1 ? 3 : 5;
  double rot = rng.uniform(0.0, 2.0 * M_PI);
  for (int k = 0; k < verts; ++k) {
    double a = rot + 2.0 * M_PI * k / verts;
    s.vx.push_back(s.cx + s.radius * std::cos(a));
    s.vy.push_back(s.cy + s.radius * std::sin(a));
  }
  return s;
}

}  // namespace

Dataset gen_shapes(int n_per_class, int size, ShapeVariant variant, uint64_t seed) {
  check_config(size >= 16, "gen_shapes: size must be >= 16");
  check_config(n_per_class >= 1, "gen_shapes: n_per_class must be >= 1");

  Dataset ds;
  ds.kind = Dataset::Kind::shapes;
  ds.class_count = 3;
  ds.width = size;
  ds.height = size;
  ds.channels = 3;
  ds.dim = 3 * size * size;

  const double border = std::max(2.0, size / 16.0);
  const double interior_gray = 0.75;
  const int plane = size * size;

  for (int i = 0; i < n_per_class; ++i) {
    for (int cls = 0; cls < 3; ++cls) {
      int id = i * 3 + cls;
      Rng rng(stream_seed(seed, {kShapesTag, static_cast<uint64_t>(id)}));
      Shape shape = make_shape(cls, size, rng);
      Shape inner = shape.eroded(border);
      double rgb[3];
      hue_to_rgb(rng.uniform(), rgb);

      Sample s;
      s.id = id;
      s.label = cls;
      s.payload.assign(static_cast<size_t>(ds.dim), 0.0);
      for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
          double px = x + 0.5, py = y + 0.5;
          if (!shape.contains(px, py)) continue;
          bool on_border = !inner.contains(px, py);
          for (int c = 0; c < 3; ++c) {
            double v;
            if (variant == ShapeVariant::fill_color) {
              v = rgb[c];
            } else {
              v = on_border ? rgb[c] : interior_gray;
            }
            s.payload[static_cast<size_t>(c) * plane + y * static_cast<size_t>(size) + x] = v;
          }
        }
      }
      ds.samples.push_back(std::move(s));
    }
  }
  return ds;
}

Dataset gen_blobs(int n_per_class, int class_count, int dim, double separation,
                  double sigma, uint64_t seed) {
  check_config(separation > 0, "gen_blobs: separation must be > 0");
  check_config(n_per_class >= 1 && class_count >= 1 && dim >= 1, "gen_blobs: bad sizes");

  Rng rng(stream_seed(seed, {kBlobsTag}));
  std::vector<std::vector<double>> centers;
  int attempts = 0;
  while (static_cast<int>(centers.size()) < class_count) {
    check_config(++attempts <= 100000,
                 "gen_blobs: could not place centers at the requested separation");
    std::vector<double> c(dim);
    for (double& v : c) v = rng.uniform(0.15, 0.85);
    bool ok = true;
    for (const auto& other : centers) {
      double d2 = 0;
      for (int k = 0; k < dim; ++k) d2 += (c[k] - other[k]) * (c[k] - other[k]);
      if (d2 < separation * separation) {
        ok = false;
        break;
      }
    }
    if (ok) centers.push_back(std::move(c));
  }

  Dataset ds;
  ds.kind = Dataset::Kind::blobs;
  ds.class_count = class_count;
  ds.dim = dim;
  for (int i = 0; i < n_per_class; ++i) {
    for (int cls = 0; cls < class_count; ++cls) {
      int id = i * class_count + cls;
      Rng srng(stream_seed(seed, {kBlobsTag, 1, static_cast<uint64_t>(id)}));
      Sample s;
      s.id = id;
      s.label = cls;
      s.payload.resize(static_cast<size_t>(dim));
      for (int k = 0; k < dim; ++k)
        s.payload[k] = std::clamp(centers[cls][k] + srng.normal(0.0, sigma), 0.0, 1.0);
      ds.samples.push_back(std::move(s));
    }
  }
  return ds;
}

// ---------------------------------------------------------------------------
// IDX ingestion
// ---------------------------------------------------------------------------

namespace {

uint32_t read_be_u32(std::istream& is, const std::string& file, long offset) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is)
    throw IngestError(file + ": truncated at offset " + std::to_string(offset) +
                      " (expected 4 more bytes)");
  return (static_cast<uint32_t>(b[0]) << 24) | (static_cast<uint32_t>(b[1]) << 16) |
         (static_cast<uint32_t>(b[2]) << 8) | static_cast<uint32_t>(b[3]);
}

}  // namespace

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
  std::ifstream imgs(images_path, std::ios::binary);
  if (!imgs) throw IngestError(images_path + ": cannot open");
  uint32_t magic = read_be_u32(imgs, images_path, 0);
  if (magic != 0x00000803u)
    throw IngestError(images_path + ": bad magic at offset 0 (got 0x" +
                      [&] { char b[16]; std::snprintf(b, 16, "%08x", magic); return std::string(b); }() +
                      ", want 0x00000803)");
  uint32_t n = read_be_u32(imgs, images_path, 4);
  uint32_t rows = read_be_u32(imgs, images_path, 8);
  uint32_t cols = read_be_u32(imgs, images_path, 12);

  std::ifstream lbls(labels_path, std::ios::binary);
  if (!lbls) throw IngestError(labels_path + ": cannot open");
  uint32_t lmagic = read_be_u32(lbls, labels_path, 0);
  if (lmagic != 0x00000801u)
    throw IngestError(labels_path + ": bad magic at offset 0 (got 0x" +
                      [&] { char b[16]; std::snprintf(b, 16, "%08x", lmagic); return std::string(b); }() +
                      ", want 0x00000801)");
  uint32_t ln = read_be_u32(lbls, labels_path, 4);
  if (ln != n)
    throw IngestError("count mismatch: " + images_path + " has " + std::to_string(n) +
                      " images but " + labels_path + " has " + std::to_string(ln) + " labels");

  Dataset ds;
  ds.kind = Dataset::Kind::idx_image;
  ds.class_count = 10;
  ds.width = static_cast<int>(cols);
  ds.height = static_cast<int>(rows);
  ds.channels = 1;
  ds.dim = static_cast<int>(rows * cols);

  const size_t pixels = static_cast<size_t>(rows) * cols;
  std::vector<unsigned char> buf(pixels);
  for (uint32_t i = 0; i < n; ++i) {
    long offset = 16 + static_cast<long>(i) * static_cast<long>(pixels);
    imgs.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(pixels));
    if (!imgs)
      throw IngestError(images_path + ": truncated at offset " + std::to_string(offset) +
                        " (image " + std::to_string(i) + ")");
    int lbl_byte = lbls.get();
    if (lbl_byte == EOF)
      throw IngestError(labels_path + ": truncated at offset " + std::to_string(8 + i) +
                        " (label " + std::to_string(i) + ")");
    if (lbl_byte > 9)
      throw IngestError(labels_path + ": label " + std::to_string(lbl_byte) +
                        " out of range 0..9 at offset " + std::to_string(8 + i));
    Sample s;
    s.id = static_cast<int>(i);
    s.label = lbl_byte;
    s.payload.resize(pixels);
    for (size_t p = 0; p < pixels; ++p) s.payload[p] = buf[p] / 255.0;
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

// ---------------------------------------------------------------------------
// Dataset container
// ---------------------------------------------------------------------------

namespace {
constexpr uint32_t kDatasetMagic = 0x53534453u;  // "SSDS"
constexpr uint32_t kDatasetVersion = 1;
}  // namespace

void save_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  check_config(static_cast<bool>(os), "save_dataset: cannot open " + path);
  io::write_u32(os, kDatasetMagic);
  io::write_u32(os, kDatasetVersion);
  io::write_u32(os, static_cast<uint32_t>(ds.kind));
  io::write_i32(os, ds.class_count);
  io::write_i32(os, ds.width);
  io::write_i32(os, ds.height);
  io::write_i32(os, ds.channels);
  io::write_i32(os, ds.dim);
  io::write_u64(os, ds.samples.size());
  for (const Sample& s : ds.samples) {
    io::write_i32(os, s.id);
    io::write_i32(os, s.label);
    os.write(reinterpret_cast<const char*>(s.payload.data()),
             static_cast<std::streamsize>(s.payload.size() * sizeof(double)));
  }
  check(static_cast<bool>(os), "save_dataset: write failed for " + path);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IngestError(path + ": cannot open");
  uint32_t magic = io::read_u32(is, "dataset magic");
  if (magic != kDatasetMagic) throw IngestError(path + ": not a dataset container");
  uint32_t version = io::read_u32(is, "dataset version");
  if (version != kDatasetVersion)
    throw IngestError(path + ": unsupported container version " + std::to_string(version));
  Dataset ds;
  ds.kind = static_cast<Dataset::Kind>(io::read_u32(is, "dataset kind"));
  ds.class_count = io::read_i32(is, "class count");
  ds.width = io::read_i32(is, "width");
  ds.height = io::read_i32(is, "height");
  ds.channels = io::read_i32(is, "channels");
  ds.dim = io::read_i32(is, "dim");
  uint64_t n = io::read_u64(is, "sample count");
  for (uint64_t i = 0; i < n; ++i) {
    Sample s;
    s.id = io::read_i32(is, "sample id");
    s.label = io::read_i32(is, "sample label");
    s.payload.resize(static_cast<size_t>(ds.dim));
    is.read(reinterpret_cast<char*>(s.payload.data()),
            static_cast<std::streamsize>(s.payload.size() * sizeof(double)));
    check(static_cast<bool>(is), path + ": truncated payload");
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

// ---------------------------------------------------------------------------
// Splitting
// ---------------------------------------------------------------------------

Split split_dataset(const Dataset& ds, const SplitSpec& spec) {
  check_config(spec.labels_per_class >= 1, "split: labels_per_class must be >= 1");
  check_config(spec.test_fraction >= 0.0 && spec.test_fraction < 1.0,
               "split: test_fraction must be in [0,1)");

  std::vector<std::vector<int>> by_class(static_cast<size_t>(ds.class_count));
  for (size_t i = 0; i < ds.samples.size(); ++i) {
    int lbl = ds.samples[i].label;
    check(lbl >= 0 && lbl < ds.class_count, "split: sample with out-of-range label");
    by_class[static_cast<size_t>(lbl)].push_back(static_cast<int>(i));
  }

  Rng rng(stream_seed(spec.seed, {kSplitTag}));
  Split out;
  for (int cls = 0; cls < ds.class_count; ++cls) {
    auto& idx = by_class[static_cast<size_t>(cls)];
    int n_test = static_cast<int>(std::llround(spec.test_fraction * static_cast<double>(idx.size())));
    check_config(static_cast<int>(idx.size()) >= n_test + spec.labels_per_class,
                 "split: class " + std::to_string(cls) + " has too few samples");
    rng.shuffle(idx);
    for (int i = 0; i < n_test; ++i) out.test.push_back(ds.samples[idx[i]]);
    for (int i = n_test; i < n_test + spec.labels_per_class; ++i)
      out.labeled.push_back(ds.samples[idx[i]]);
    int ustart = spec.unlabeled_includes_labeled ? n_test : n_test + spec.labels_per_class;
    for (int i = ustart; i < static_cast<int>(idx.size()); ++i) {
      Sample s = ds.samples[idx[i]];
      out.unlabeled_truth.push_back(s.label);
      s.label = -1;  // the trainer never sees the truth
      out.unlabeled.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace semisup
