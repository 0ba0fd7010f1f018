#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include "pointillist/gram_store.hpp"
#include "pointillist/timeseries.hpp"

namespace pointillist {

/// The six per-root features behind the FT/DFT/CFT choice: flatness
/// (cosine of FT against the all-ones vector), maximum day-over-day
/// epsilon-smoothed frequency ratio, min/max/mean of FT, and the window
/// length in days.
struct RootFeatures {
  double flatness = 0.0;
  double max_change_rate = 0.0;
  double min_ft = 0.0;
  double max_ft = 0.0;
  double mean_ft = 0.0;
  int period_len = 0;

  std::array<double, 6> as_array() const {
    return {flatness, max_change_rate, min_ft, max_ft, mean_ft, static_cast<double>(period_len)};
  }
};

RootFeatures compute_features(const FrequencySeries& series, double epsilon = 1.0);

struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One-vs-rest linear max-margin classifier over normalized features.
struct SelectorModel {
  struct ClassWeights {
    bool present = false;
    std::array<double, 6> w{};
    double bias = 0.0;
  };

  std::array<double, 6> feature_mean{};
  std::array<double, 6> feature_scale{};  // always > 0
  std::array<ClassWeights, 3> classes{};  // indexed by VectorKind

  void save(std::ostream& out) const;
  void save(const std::string& path) const;
  static SelectorModel load(std::istream& in);
  static SelectorModel load(const std::string& path);
};

struct TrainOptions {
  double lambda = 0.01;
  int iterations = 4000;
  std::uint64_t seed = 0;  // reserved; full-batch training is deterministic
};

using LabeledFeatures = std::pair<RootFeatures, VectorKind>;

/// Deterministic full-batch subgradient training. Requires at least two
/// distinct labels.
SelectorModel train_selector(std::span<const LabeledFeatures> examples,
                             const TrainOptions& options = {});

/// With a model: argmax class score, ties broken FT < DFT < CFT. Without
/// one: heuristic fallback — CFT for strongly bursting roots
/// (max_change_rate > 10), DFT for fluctuating ones (flatness < 0.9),
/// FT otherwise.
VectorKind select_kind(const RootFeatures& features, const SelectorModel* model = nullptr);

}  // namespace pointillist
