#include "pointillist/root_validator.hpp"

#include <stdexcept>

#include "pointillist/timeseries.hpp"

namespace pointillist {

const char* to_string(RootReason r) {
  switch (r) {
    case RootReason::Ok: return "OK";
    case RootReason::TooSparse: return "TOO_SPARSE";
    case RootReason::TooFlat: return "TOO_FLAT";
  }
  return "?";
}

RootVerdict validate_root(const FrequencySeries& series, const RootCriteria& criteria) {
  if (series.values.empty()) throw std::invalid_argument("series is empty");
  RootVerdict v;
  v.gram = series.gram;

  std::size_t zeros = 0;
  for (auto c : series.values)
    if (c == 0) ++zeros;
  v.zero_fraction = static_cast<double>(zeros) / static_cast<double>(series.values.size());

  TrendVector f = ft(series);
  v.flatness = cosine_with_ones(f.values).value_or(0.0);

  if (v.zero_fraction > criteria.max_zero_fraction) {
    v.valid = false;
    v.reason = RootReason::TooSparse;
  } else if (v.flatness >= criteria.flatness_threshold) {
    v.valid = false;
    v.reason = RootReason::TooFlat;
  } else {
    v.valid = true;
    v.reason = RootReason::Ok;
  }
  return v;
}

}  // namespace pointillist
