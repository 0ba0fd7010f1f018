#include "pointillist/vector_selector.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

namespace pointillist {

RootFeatures compute_features(const FrequencySeries& series, double epsilon) {
  if (series.values.size() < 2) throw std::invalid_argument("series too short for features");
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  RootFeatures f;
  f.period_len = static_cast<int>(series.values.size());

  std::vector<double> values;
  values.reserve(series.values.size());
  double sum = 0;
  double mn = std::numeric_limits<double>::infinity();
  double mx = -std::numeric_limits<double>::infinity();
  for (auto c : series.values) {
    double x = static_cast<double>(c);
    values.push_back(x);
    sum += x;
    mn = std::min(mn, x);
    mx = std::max(mx, x);
  }
  f.min_ft = mn;
  f.max_ft = mx;
  f.mean_ft = sum / static_cast<double>(series.values.size());
  f.flatness = cosine_with_ones(values).value_or(0.0);

  double rate = 0.0;
  for (std::size_t i = 0; i + 1 < series.values.size(); ++i) {
    double r = (static_cast<double>(series.values[i + 1]) + epsilon) /
               (static_cast<double>(series.values[i]) + epsilon);
    rate = std::max(rate, r);
  }
  f.max_change_rate = rate;
  return f;
}

namespace {

std::array<double, 6> normalize(const std::array<double, 6>& x, const SelectorModel& m) {
  std::array<double, 6> out;
  for (std::size_t j = 0; j < 6; ++j) out[j] = (x[j] - m.feature_mean[j]) / m.feature_scale[j];
  return out;
}

int kind_index(VectorKind k) { return static_cast<int>(k); }

constexpr VectorKind kKindOrder[3] = {VectorKind::Ft, VectorKind::Dft, VectorKind::Cft};

}  // namespace

SelectorModel train_selector(std::span<const LabeledFeatures> examples, const TrainOptions& options) {
  if (examples.empty()) throw TrainingError("no training examples");
  bool seen[3] = {false, false, false};
  for (const auto& [feat, label] : examples) seen[kind_index(label)] = true;
  if (static_cast<int>(seen[0]) + static_cast<int>(seen[1]) + static_cast<int>(seen[2]) < 2)
    throw TrainingError("need at least two distinct labels");

  SelectorModel model;
  const std::size_t m = examples.size();

  // feature normalization: per-feature mean and stddev
  for (std::size_t j = 0; j < 6; ++j) {
    double sum = 0;
    for (const auto& [feat, label] : examples) sum += feat.as_array()[j];
    model.feature_mean[j] = sum / static_cast<double>(m);
  }
  for (std::size_t j = 0; j < 6; ++j) {
    double var = 0;
    for (const auto& [feat, label] : examples) {
      double d = feat.as_array()[j] - model.feature_mean[j];
      var += d * d;
    }
    double sd = std::sqrt(var / static_cast<double>(m));
    model.feature_scale[j] = sd > 1e-12 ? sd : 1.0;
  }

  std::vector<std::array<double, 6>> xs;
  xs.reserve(m);
  for (const auto& [feat, label] : examples) xs.push_back(normalize(feat.as_array(), model));

  // full-batch subgradient descent on L2-regularized hinge loss, one
  // binary problem per present class
  const double lambda = options.lambda;
  for (int k = 0; k < 3; ++k) {
    if (!seen[k]) continue;
    auto& cw = model.classes[static_cast<std::size_t>(k)];
    cw.present = true;
    std::array<double, 6> w{};
    double b = 0;
    for (int t = 1; t <= options.iterations; ++t) {
      double eta = 1.0 / (lambda * static_cast<double>(t));
      std::array<double, 6> grad{};
      double grad_b = 0;
      for (std::size_t i = 0; i < m; ++i) {
        double y = kind_index(examples[i].second) == k ? 1.0 : -1.0;
        double margin = b;
        for (std::size_t j = 0; j < 6; ++j) margin += w[j] * xs[i][j];
        if (y * margin < 1.0) {
          for (std::size_t j = 0; j < 6; ++j) grad[j] += y * xs[i][j];
          grad_b += y;
        }
      }
      double shrink = 1.0 - eta * lambda;
      for (std::size_t j = 0; j < 6; ++j)
        w[j] = shrink * w[j] + eta * grad[j] / static_cast<double>(m);
      b += eta * grad_b / static_cast<double>(m);
    }
    cw.w = w;
    cw.bias = b;
  }
  (void)options.seed;
  return model;
}

VectorKind select_kind(const RootFeatures& features, const SelectorModel* model) {
  if (model == nullptr) {
    if (features.max_change_rate > 10.0) return VectorKind::Cft;
    if (features.flatness < 0.9) return VectorKind::Dft;
    return VectorKind::Ft;
  }
  auto x = normalize(features.as_array(), *model);
  double best = -std::numeric_limits<double>::infinity();
  VectorKind pick = VectorKind::Ft;
  for (VectorKind k : kKindOrder) {
    const auto& cw = model->classes[static_cast<std::size_t>(kind_index(k))];
    if (!cw.present) continue;
    double s = cw.bias;
    for (std::size_t j = 0; j < 6; ++j) s += cw.w[j] * x[j];
    if (s > best) {  // strict: ties keep the earlier kind in FT < DFT < CFT order
      best = s;
      pick = k;
    }
  }
  return pick;
}

void SelectorModel::save(std::ostream& out) const {
  out.precision(17);
  out << "pointillist-selector-model v1\n";
  out << "mean";
  for (double v : feature_mean) out << ' ' << v;
  out << "\nscale";
  for (double v : feature_scale) out << ' ' << v;
  out << '\n';
  for (VectorKind k : kKindOrder) {
    const auto& cw = classes[static_cast<std::size_t>(kind_index(k))];
    if (!cw.present) continue;
    out << "class " << to_string(k);
    for (double v : cw.w) out << ' ' << v;
    out << ' ' << cw.bias << '\n';
  }
}

void SelectorModel::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  save(f);
}

SelectorModel SelectorModel::load(std::istream& in) {
  SelectorModel model;
  std::string line;
  if (!std::getline(in, line) || line != "pointillist-selector-model v1")
    throw std::runtime_error("bad selector model header");
  bool have_mean = false, have_scale = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "mean") {
      for (auto& v : model.feature_mean) ss >> v;
      have_mean = true;
    } else if (tag == "scale") {
      for (auto& v : model.feature_scale) ss >> v;
      have_scale = true;
    } else if (tag == "class") {
      std::string name;
      ss >> name;
      auto kind = vector_kind_from_string(name);
      if (!kind) throw std::runtime_error("bad class name in selector model: " + name);
      auto& cw = model.classes[static_cast<std::size_t>(kind_index(*kind))];
      cw.present = true;
      for (auto& v : cw.w) ss >> v;
      ss >> cw.bias;
    } else {
      throw std::runtime_error("bad selector model line: " + line);
    }
    if (!ss) throw std::runtime_error("bad selector model line: " + line);
  }
  if (!have_mean || !have_scale) throw std::runtime_error("selector model missing normalization");
  for (double s : model.feature_scale)
    if (!(s > 0)) throw std::runtime_error("selector model scale must be positive");
  return model;
}

SelectorModel SelectorModel::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  return load(f);
}

}  // namespace pointillist
