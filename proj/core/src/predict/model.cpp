#include "nwtb/predict/model.hpp"

#include <algorithm>
#include <set>

#include <spdlog/spdlog.h>

namespace nwtb::predict {
namespace {

struct KindName {
  ModelKind kind;
  std::string_view short_name;
  std::string_view long_name;
};

constexpr KindName kKindNames[] = {
    {ModelKind::kDecisionTree, "dt", "DECISION_TREE"},
    {ModelKind::kKnn, "knn", "KNN"},
    {ModelKind::kRandomForest, "rf", "RANDOM_FOREST"},
    {ModelKind::kGradientBoosting, "gb", "GRADIENT_BOOSTING"},
};

template <typename T>
T param(const nlohmann::json& h, const char* key) {
  try {
    return h.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument(std::string("hyperparameter '") + key + "' has the wrong type");
  }
}

std::unique_ptr<Classifier> make_classifier(ModelKind kind, const nlohmann::json& h) {
  switch (kind) {
    case ModelKind::kDecisionTree: {
      TreeParams p;
      p.max_depth = param<int>(h, "max_depth");
      p.min_samples_split = param<std::size_t>(h, "min_samples_split");
      if (p.max_depth < 0 || p.min_samples_split < 2) throw std::invalid_argument("invalid tree hyperparameters");
      return std::make_unique<DecisionTree>(p);
    }
    case ModelKind::kKnn: {
      KnnParams p;
      p.k = param<std::size_t>(h, "k");
      if (p.k == 0) throw std::invalid_argument("k must be positive");
      return std::make_unique<Knn>(p);
    }
#if NWTB_ENABLE_ENSEMBLES
    case ModelKind::kRandomForest: {
      ForestParams p;
      p.n_estimators = param<std::size_t>(h, "n_estimators");
      p.max_depth = param<int>(h, "max_depth");
      p.max_features = param<std::size_t>(h, "max_features");
      p.seed = param<std::uint64_t>(h, "seed");
      return std::make_unique<RandomForest>(p);
    }
    case ModelKind::kGradientBoosting: {
      BoostingParams p;
      p.n_estimators = param<std::size_t>(h, "n_estimators");
      p.max_depth = param<int>(h, "max_depth");
      p.learning_rate = param<double>(h, "learning_rate");
      p.max_bins = param<std::size_t>(h, "max_bins");
      if (!(p.learning_rate > 0.0) || p.max_depth < 1) throw std::invalid_argument("invalid boosting hyperparameters");
      return std::make_unique<GradientBoosting>(p);
    }
#else
    case ModelKind::kRandomForest:
    case ModelKind::kGradientBoosting:
      break;
#endif
  }
  throw UnsupportedModel(kind);
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  for (const auto& k : kKindNames) {
    if (k.kind == kind) return k.short_name;
  }
  return "?";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  for (const auto& k : kKindNames) {
    if (name == k.short_name || name == k.long_name) return k.kind;
  }
  return std::nullopt;
}

bool is_supported(ModelKind kind) {
#if NWTB_ENABLE_ENSEMBLES
  (void)kind;
  return true;
#else
  return kind == ModelKind::kDecisionTree || kind == ModelKind::kKnn;
#endif
}

nlohmann::json default_hyperparams(ModelKind kind) {
  switch (kind) {
    case ModelKind::kDecisionTree:
      return {{"max_depth", 0}, {"min_samples_split", 2}};
    case ModelKind::kKnn:
      return {{"k", 5}};
    case ModelKind::kRandomForest:
      return {{"n_estimators", 100}, {"max_depth", 0}, {"max_features", 0}, {"seed", 0}};
    case ModelKind::kGradientBoosting:
      return {{"n_estimators", 100}, {"max_depth", 9}, {"learning_rate", 0.05}, {"max_bins", 255}};
  }
  return nlohmann::json::object();
}

Prediction TrainedModel::predict(const FeatureContext& features) const {
  std::size_t unseen = 0;
  const auto x = encoder_.encode(features, &unseen);
  if (unseen) spdlog::debug("predict: {} unseen categories for {}", unseen, features.supi.value);
  const auto vote = classifier_->predict(x);
  return {labels_[static_cast<std::size_t>(vote.label)], vote.confidence};
}

std::shared_ptr<TrainedModel> train(ModelKind kind, std::span<const FeatureRow> rows, const nlohmann::json& overrides,
                                    EncoderOptions options) {
  if (!is_supported(kind)) throw UnsupportedModel(kind);
  if (rows.empty()) throw std::invalid_argument("cannot train on an empty dataset");
  auto h = default_hyperparams(kind);
  if (!overrides.is_null()) {
    if (!overrides.is_object()) throw std::invalid_argument("hyperparameters must be an object");
    for (const auto& [key, value] : overrides.items()) {
      if (!h.contains(key)) {
        throw std::invalid_argument("unknown hyperparameter '" + key + "' for " + std::string(to_string(kind)));
      }
      h[key] = value;
    }
  }

  std::shared_ptr<TrainedModel> model(new TrainedModel());
  model->kind_ = kind;
  model->hyperparams_ = h;
  model->encoder_ = Encoder(options);
  model->encoder_.fit(rows);

  std::set<std::string> labels;
  for (const auto& r : rows) labels.insert(r.label);
  model->labels_.assign(labels.begin(), labels.end());
  std::vector<int> y;
  y.reserve(rows.size());
  for (const auto& r : rows) {
    y.push_back(static_cast<int>(std::lower_bound(model->labels_.begin(), model->labels_.end(), r.label) -
                                 model->labels_.begin()));
  }
  model->classifier_ = make_classifier(kind, h);
  model->classifier_->fit(model->encoder_.transform(rows), y, static_cast<int>(model->labels_.size()));
  return model;
}

}  // namespace nwtb::predict
