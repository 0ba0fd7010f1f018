#pragma once

#include <string>

#include "pointillist/gram_store.hpp"

namespace pointillist {

enum class RootReason { Ok, TooSparse, TooFlat };

const char* to_string(RootReason r);

struct RootVerdict {
  Gram gram;
  bool valid = false;
  RootReason reason = RootReason::Ok;
  double flatness = 0.0;       // cosine of FT against the all-ones vector
  double zero_fraction = 0.0;  // share of zero days in the window
};

struct RootCriteria {
  double flatness_threshold = 0.98;
  double max_zero_fraction = 0.5;
};

/// Two exclusion rules, sparsity checked first: a series that is mostly
/// zeros biases the cosine, and a series too close to the constant vector
/// has no usable fluctuation. Flatness at or above the threshold counts
/// as flat.
RootVerdict validate_root(const FrequencySeries& series, const RootCriteria& criteria = {});

}  // namespace pointillist
