#include "procnet/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "procnet/csv.hpp"
#include "procnet/errors.hpp"
#include "procnet/kv_config.hpp"
#include "procnet/rng.hpp"

namespace procnet {

namespace {

// NaN when either side is constant.
double pearson_or_nan(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) return std::nan("");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// Linear interpolation between order statistics (R type 7).
double quantile(std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("pearson: series lengths differ");
  if (x.size() < 3) throw DataError("pearson: need at least 3 pairs");
  const double r = pearson_or_nan(x, y);
  if (std::isnan(r)) throw DataError("zero variance");
  return r;
}

CorrelationResult pearson_with_bootstrap(std::span<const double> x, std::span<const double> y, std::size_t n_boot,
                                         std::uint64_t seed) {
  CorrelationResult res;
  res.r = pearson(x, y);
  res.n = x.size();
  res.n_boot = n_boot;
  if (n_boot == 0) {
    res.ci_low = res.ci_high = res.r;
    return res;
  }
  Rng rng(seed);
  std::vector<double> bx(x.size()), by(y.size()), stats;
  stats.reserve(n_boot);
  // A resample of a non-constant series is constant with tiny probability, so
  // the redraw loop terminates; cap it anyway.
  const std::size_t max_draws = 100 * n_boot + 1000;
  for (std::size_t draws = 0; stats.size() < n_boot && draws < max_draws; ++draws) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto k = uniform_below(rng, x.size());
      bx[i] = x[k];
      by[i] = y[k];
    }
    const double r = pearson_or_nan(bx, by);
    if (std::isnan(r)) {
      ++res.n_degenerate;
      continue;
    }
    stats.push_back(r);
  }
  if (stats.empty()) throw DataError("bootstrap produced no usable resamples");
  std::sort(stats.begin(), stats.end());
  res.ci_low = quantile(stats, 0.025);
  res.ci_high = quantile(stats, 0.975);
  return res;
}

Polarity parse_polarity(std::string_view text) {
  if (text == "higher_is_worse") return Polarity::HigherIsWorse;
  if (text == "higher_is_better") return Polarity::HigherIsBetter;
  throw DataError("polarity must be higher_is_worse or higher_is_better, got '" + std::string(text) + "'");
}

std::string_view to_string(Polarity polarity) {
  return polarity == Polarity::HigherIsWorse ? "higher_is_worse" : "higher_is_better";
}

int expected_sign(Polarity polarity) { return polarity == Polarity::HigherIsWorse ? 1 : -1; }

IndicatorSeries IndicatorSeries::parse(std::string_view text, std::string name, Polarity polarity, int year) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw DataError("indicator " + name + ": empty file");
  const auto& header = rows.front().fields;
  auto col = [&](std::string_view want) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == want) return i;
    }
    throw DataError("indicator " + name + ": header lacks '" + std::string(want) + "'");
  };
  const auto c_country = col("country");
  const auto c_value = col("value");

  IndicatorSeries s;
  s.name = std::move(name);
  s.polarity = polarity;
  s.year = year;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    const auto where = s.name + " line " + std::to_string(rows[r].line);
    if (f.size() != header.size()) throw DataError("indicator " + where + ": wrong field count");
    const auto country = trim(f[c_country]);
    const auto text_value = trim(f[c_value]);
    char* end = nullptr;
    const double v = std::strtod(text_value.c_str(), &end);
    if (text_value.empty() || end != text_value.c_str() + text_value.size() || !std::isfinite(v)) {
      throw DataError("indicator " + where + ": value is not a finite number");
    }
    if (!s.values.emplace(country, v).second) throw DataError("indicator " + where + ": duplicate country " + country);
  }
  return s;
}

IndicatorSeries IndicatorSeries::load(const std::filesystem::path& path, std::string name, Polarity polarity, int year) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read indicator file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), std::move(name), polarity, year);
}

}  // namespace procnet
