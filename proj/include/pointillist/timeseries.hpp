#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pointillist/gram_store.hpp"

namespace pointillist {

enum class VectorKind { Ft, Dft, Cft };

const char* to_string(VectorKind k);
std::optional<VectorKind> vector_kind_from_string(std::string_view s);

/// The object cosine similarity compares. FT is the daily frequency
/// vector; DFT its day-over-day differences; CFT the day-over-day log10
/// frequency ratios (epsilon-smoothed so zero counts stay defined).
struct TrendVector {
  VectorKind kind = VectorKind::Ft;
  std::vector<double> values;
  Gram source_gram;
  DayIndex start_day = 0;
};

TrendVector ft(const FrequencySeries& series);

/// values[i] = FT[i+1] - FT[i]. Requires series length >= 2.
TrendVector dft(const FrequencySeries& series);

/// values[i] = log10((FT[i+1] + epsilon) / (FT[i] + epsilon)).
/// Requires series length >= 2 and epsilon > 0.
TrendVector cft(const FrequencySeries& series, double epsilon = 1.0);

TrendVector make_vector(VectorKind kind, const FrequencySeries& series, double cft_epsilon = 1.0);

/// Cosine similarity; nullopt when either vector has zero norm
/// ("undefined similarity" — callers rank it as 0 and flag it).
/// The denominator is computed as sqrt(|a|^2 * |b|^2), which keeps
/// cosine(v, v) == 1.0 and constant-vs-ones == 1.0 exact.
std::optional<double> cosine(std::span<const double> a, std::span<const double> b);

/// Same, but also rejects comparisons across vector kinds.
std::optional<double> cosine(const TrendVector& a, const TrendVector& b);

/// Cosine of `a` against the all-ones vector of equal length.
std::optional<double> cosine_with_ones(std::span<const double> a);

}  // namespace pointillist
