#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>

namespace procnet {

/// Pearson correlation. Throws DataError("zero variance") for constant input
/// and for fewer than three pairs or mismatched lengths.
double pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationResult {
  double r = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n = 0;
  std::size_t n_boot = 0;
  std::size_t n_degenerate = 0;  // resamples with zero variance, redrawn
};

/// Pearson r with a percentile bootstrap 95% interval over paired resamples
/// drawn with replacement. Resamples that are constant in either variable are
/// redrawn (and counted).
CorrelationResult pearson_with_bootstrap(std::span<const double> x, std::span<const double> y,
                                         std::size_t n_boot, std::uint64_t seed);

enum class Polarity { HigherIsWorse, HigherIsBetter };

Polarity parse_polarity(std::string_view text);
std::string_view to_string(Polarity polarity);

/// External country-level indicator, e.g. a perception index.
struct IndicatorSeries {
  std::string name;
  std::map<std::string, double> values;  // country -> value
  int year = 0;                          // 0 when unknown
  Polarity polarity = Polarity::HigherIsWorse;

  /// CSV with header `country,value`. Throws DataError on duplicate
  /// countries or non-finite values.
  static IndicatorSeries load(const std::filesystem::path& path, std::string name, Polarity polarity,
                              int year = 0);
  static IndicatorSeries parse(std::string_view text, std::string name, Polarity polarity, int year = 0);
};

/// Sign a risk measure should correlate with: +1 for higher_is_worse, -1 for
/// higher_is_better.
int expected_sign(Polarity polarity);

}  // namespace procnet
