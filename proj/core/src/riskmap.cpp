#include "wildfire/riskmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include <zlib.h>

#include "wildfire/error.hpp"
#include "wildfire/parallel.hpp"
#include "wildfire/temporal.hpp"

namespace wildfire {

Grid predict_grid(const Model& model, const FeatureStack& stack,
                  const PredictSpec& spec) {
  const int w = stack.width();
  const int h = stack.height();

  // One grid per model feature, in the model's feature order.
  std::vector<Grid> owned;
  std::vector<const Grid*> layers;
  owned.reserve(model.feature_names().size());
  layers.reserve(model.feature_names().size());
  for (const std::string& name : model.feature_names()) {
    const BandData* band = stack.find(name);
    if (band == nullptr)
      throw Error(ErrorCode::FeatureMismatch, "stack lacks band '" + name + "'");
    if (band->is_static()) {
      layers.push_back(&band->static_grid());
    } else if (spec.mode == YearMode::AggregatedStatic) {
      owned.push_back(aggregate(*band));
      layers.push_back(&owned.back());
    } else {
      owned.push_back(anomaly(*band, spec.year));
      layers.push_back(&owned.back());
    }
  }

  Grid out(w, h, stack.transform(), stack.nodata());
  const std::size_t p = layers.size();
  parallel_for(0, h, [&](std::int64_t r) {
    std::vector<double> features(p);
    for (int c = 0; c < w; ++c) {
      bool ok = true;
      for (std::size_t j = 0; j < p; ++j) {
        const double v = layers[j]->at(int(r), c);
        if (layers[j]->is_nodata_value(v)) {
          ok = false;
          break;
        }
        features[j] = v;
      }
      if (ok) out.set(int(r), c, model.predict_proba(features));
    }
  });
  return out;
}

namespace {

/// Type-7 quantile (linear interpolation between order statistics).
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  const double pos = q * double(n - 1);
  const std::size_t lo = std::size_t(pos);
  const double frac = pos - double(lo);
  return lo + 1 < n ? sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]) : sorted[lo];
}

/// Exact Fisher-Jenks dynamic program on the (possibly strided) sorted
/// values; quadratic in the number of points, so large inputs are thinned
/// to a uniform stride first.
std::vector<double> jenks_breaks(std::vector<double> sorted, int n_classes) {
  constexpr std::size_t kMaxPoints = 2048;
  if (sorted.size() > kMaxPoints) {
    std::vector<double> thinned;
    thinned.reserve(kMaxPoints);
    const double step = double(sorted.size() - 1) / double(kMaxPoints - 1);
    for (std::size_t i = 0; i < kMaxPoints; ++i)
      thinned.push_back(sorted[std::size_t(std::llround(i * step))]);
    sorted = std::move(thinned);
  }
  const std::size_t n = sorted.size();
  const int k = n_classes;

  std::vector<double> prefix(n + 1, 0.0), prefix2(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + sorted[i];
    prefix2[i + 1] = prefix2[i] + sorted[i] * sorted[i];
  }
  auto sse = [&](std::size_t lo, std::size_t hi) {  // [lo, hi)
    const double cnt = double(hi - lo);
    const double sum = prefix[hi] - prefix[lo];
    return (prefix2[hi] - prefix2[lo]) - sum * sum / cnt;
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cost(n + 1, inf);
  std::vector<std::vector<std::size_t>> from(std::size_t(k) + 1,
                                             std::vector<std::size_t>(n + 1, 0));
  for (std::size_t i = 1; i <= n; ++i) cost[i] = sse(0, i);
  for (int c = 2; c <= k; ++c) {
    std::vector<double> next(n + 1, inf);
    for (std::size_t i = std::size_t(c); i <= n; ++i) {
      for (std::size_t j = std::size_t(c) - 1; j < i; ++j) {
        const double v = cost[j] + sse(j, i);
        if (v < next[i]) {
          next[i] = v;
          from[std::size_t(c)][i] = j;
        }
      }
    }
    cost = std::move(next);
  }

  std::vector<double> breaks(std::size_t(k) - 1, 0.0);
  std::size_t end = n;
  for (int c = k; c >= 2; --c) {
    const std::size_t start = from[std::size_t(c)][end];
    breaks[std::size_t(c) - 2] = sorted[start - 1];  // class upper bound
    end = start;
  }
  return breaks;
}

}  // namespace

RiskClassification classify_risk(const Grid& probability, int n_classes,
                                 BreakMethod method) {
  if (n_classes < 2)
    throw Error(ErrorCode::InvalidArgument, "need at least 2 classes");
  std::vector<double> valid;
  valid.reserve(std::size_t(probability.cell_count()));
  for (double v : probability.values())
    if (!probability.is_nodata_value(v)) valid.push_back(v);
  if (std::int64_t(valid.size()) < n_classes)
    throw Error(ErrorCode::TooFewCells, "need at least n_classes valid cells");
  std::sort(valid.begin(), valid.end());

  RiskClassification out;
  if (method == BreakMethod::Quantile) {
    for (int c = 1; c < n_classes; ++c)
      out.breaks.push_back(quantile_sorted(valid, double(c) / n_classes));
  } else {
    out.breaks = jenks_breaks(valid, n_classes);
  }
  // Keep breaks non-decreasing even in degenerate (constant) grids.
  for (std::size_t i = 1; i < out.breaks.size(); ++i)
    out.breaks[i] = std::max(out.breaks[i], out.breaks[i - 1]);

  out.classes = Grid(probability.width(), probability.height(),
                     probability.transform(), probability.nodata());
  for (int r = 0; r < probability.height(); ++r) {
    for (int c = 0; c < probability.width(); ++c) {
      const double v = probability.at(r, c);
      if (probability.is_nodata_value(v)) continue;
      int cls = n_classes;
      for (std::size_t b = 0; b < out.breaks.size(); ++b) {
        if (v <= out.breaks[b]) {
          cls = int(b) + 1;
          break;
        }
      }
      out.classes.set(r, c, double(cls));
    }
  }
  return out;
}

RiskMap make_risk_map(const Model& model, const FeatureStack& stack,
                      const PredictSpec& spec, int n_classes, BreakMethod method) {
  RiskMap map;
  map.probability = predict_grid(model, stack, spec);
  RiskClassification rc = classify_risk(map.probability, n_classes, method);
  map.classes = std::move(rc.classes);
  map.breaks = std::move(rc.breaks);
  map.palette = Palette::blue_to_red();
  return map;
}

Palette Palette::blue_to_red() {
  Palette p;
  p.colors = {Rgb{0, 0, 255}, Rgb{0, 255, 255}, Rgb{255, 255, 0},
              Rgb{255, 165, 0}, Rgb{255, 0, 0}};
  return p;
}

namespace {

Rgb class_color(const Grid& classes, const Palette& palette, int r, int c,
                bool& nodata) {
  const double v = classes.at(r, c);
  if (classes.is_nodata_value(v)) {
    nodata = true;
    return Rgb{255, 255, 255};
  }
  nodata = false;
  if (v != std::floor(v) || v < 1.0 || v > double(palette.colors.size()))
    throw Error(ErrorCode::InvalidClassValue,
                "class value " + std::to_string(v) + " outside palette");
  return palette.colors[std::size_t(v) - 1];
}

void push_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(std::uint8_t(v >> 24));
  out.push_back(std::uint8_t(v >> 16));
  out.push_back(std::uint8_t(v >> 8));
  out.push_back(std::uint8_t(v));
}

void push_chunk(std::vector<std::uint8_t>& out, const char type[4],
                const std::vector<std::uint8_t>& payload) {
  push_u32(out, std::uint32_t(payload.size()));
  const std::size_t crc_start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), payload.begin(), payload.end());
  const uLong crc = ::crc32(0, out.data() + crc_start, uInt(out.size() - crc_start));
  push_u32(out, std::uint32_t(crc));
}

}  // namespace

std::string render_ppm(const Grid& classes, const Palette& palette) {
  std::string out = "P6\n" + std::to_string(classes.width()) + " " +
                    std::to_string(classes.height()) + "\n255\n";
  out.reserve(out.size() + std::size_t(classes.cell_count()) * 3);
  for (int r = 0; r < classes.height(); ++r) {
    for (int c = 0; c < classes.width(); ++c) {
      bool nodata = false;
      const Rgb rgb = class_color(classes, palette, r, c, nodata);
      out.push_back(char(rgb.r));
      out.push_back(char(rgb.g));
      out.push_back(char(rgb.b));
    }
  }
  return out;
}

std::vector<std::uint8_t> render_png(const Grid& classes, const Palette& palette) {
  const int w = classes.width();
  const int h = classes.height();

  // Raw image: one filter byte (0) per scanline, RGBA pixels.
  std::vector<std::uint8_t> raw;
  raw.reserve(std::size_t(h) * (1 + std::size_t(w) * 4));
  for (int r = 0; r < h; ++r) {
    raw.push_back(0);
    for (int c = 0; c < w; ++c) {
      bool nodata = false;
      const Rgb rgb = class_color(classes, palette, r, c, nodata);
      raw.push_back(rgb.r);
      raw.push_back(rgb.g);
      raw.push_back(rgb.b);
      raw.push_back(nodata ? 0 : 255);
    }
  }

  uLongf compressed_size = ::compressBound(uLong(raw.size()));
  std::vector<std::uint8_t> compressed(compressed_size);
  if (::compress2(compressed.data(), &compressed_size, raw.data(),
                  uLong(raw.size()), 6) != Z_OK)
    throw Error(ErrorCode::IoFailure, "png deflate failed");
  compressed.resize(compressed_size);

  std::vector<std::uint8_t> png = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  std::vector<std::uint8_t> ihdr;
  push_u32(ihdr, std::uint32_t(w));
  push_u32(ihdr, std::uint32_t(h));
  ihdr.push_back(8);   // bit depth
  ihdr.push_back(6);   // color type RGBA
  ihdr.push_back(0);   // compression
  ihdr.push_back(0);   // filter
  ihdr.push_back(0);   // interlace
  push_chunk(png, "IHDR", ihdr);
  push_chunk(png, "IDAT", compressed);
  push_chunk(png, "IEND", {});
  return png;
}

std::vector<std::int64_t> class_histogram(const Grid& classes, int n_classes) {
  std::vector<std::int64_t> hist(std::size_t(n_classes), 0);
  for (double v : classes.values()) {
    if (classes.is_nodata_value(v)) continue;
    const int cls = int(v);
    if (cls < 1 || cls > n_classes)
      throw Error(ErrorCode::InvalidClassValue, "class value outside 1..n");
    ++hist[std::size_t(cls) - 1];
  }
  return hist;
}

}  // namespace wildfire
