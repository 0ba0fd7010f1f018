#include "pointillist/timeseries.hpp"

#include <cmath>
#include <stdexcept>

namespace pointillist {

const char* to_string(VectorKind k) {
  switch (k) {
    case VectorKind::Ft: return "FT";
    case VectorKind::Dft: return "DFT";
    case VectorKind::Cft: return "CFT";
  }
  return "?";
}

std::optional<VectorKind> vector_kind_from_string(std::string_view s) {
  if (s == "FT" || s == "ft") return VectorKind::Ft;
  if (s == "DFT" || s == "dft") return VectorKind::Dft;
  if (s == "CFT" || s == "cft") return VectorKind::Cft;
  return std::nullopt;
}

TrendVector ft(const FrequencySeries& series) {
  if (series.values.empty()) throw std::invalid_argument("series is empty");
  TrendVector v{VectorKind::Ft, {}, series.gram, series.start_day};
  v.values.reserve(series.values.size());
  for (auto c : series.values) v.values.push_back(static_cast<double>(c));
  return v;
}

TrendVector dft(const FrequencySeries& series) {
  if (series.values.size() < 2) throw std::invalid_argument("series too short for DFT");
  TrendVector v{VectorKind::Dft, {}, series.gram, series.start_day};
  v.values.reserve(series.values.size() - 1);
  for (std::size_t i = 0; i + 1 < series.values.size(); ++i)
    v.values.push_back(static_cast<double>(series.values[i + 1] - series.values[i]));
  return v;
}

TrendVector cft(const FrequencySeries& series, double epsilon) {
  if (series.values.size() < 2) throw std::invalid_argument("series too short for CFT");
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  TrendVector v{VectorKind::Cft, {}, series.gram, series.start_day};
  v.values.reserve(series.values.size() - 1);
  for (std::size_t i = 0; i + 1 < series.values.size(); ++i) {
    double num = static_cast<double>(series.values[i + 1]) + epsilon;
    double den = static_cast<double>(series.values[i]) + epsilon;
    v.values.push_back(std::log10(num / den));
  }
  return v;
}

TrendVector make_vector(VectorKind kind, const FrequencySeries& series, double cft_epsilon) {
  switch (kind) {
    case VectorKind::Ft: return ft(series);
    case VectorKind::Dft: return dft(series);
    case VectorKind::Cft: return cft(series, cft_epsilon);
  }
  throw std::invalid_argument("bad vector kind");
}

std::optional<double> cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine: length mismatch");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return std::nullopt;
  return dot / std::sqrt(na * nb);
}

std::optional<double> cosine(const TrendVector& a, const TrendVector& b) {
  if (a.kind != b.kind) throw std::invalid_argument("cosine: vector kind mismatch");
  return cosine(std::span<const double>(a.values), std::span<const double>(b.values));
}

std::optional<double> cosine_with_ones(std::span<const double> a) {
  if (a.empty()) throw std::invalid_argument("cosine_with_ones: empty vector");
  double sum = 0, na = 0;
  for (double x : a) {
    sum += x;
    na += x * x;
  }
  if (na == 0.0) return std::nullopt;
  return sum / std::sqrt(na * static_cast<double>(a.size()));
}

}  // namespace pointillist
