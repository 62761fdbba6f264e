#pragma once

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nwtb/predict/classifier.hpp"
#include "nwtb/predict/encoder.hpp"
#include "nwtb/predict/features.hpp"

namespace nwtb::predict {

enum class ModelKind { kDecisionTree, kKnn, kRandomForest, kGradientBoosting };

// Short names: dt, knn, rf, gb. parse_model_kind also accepts the upper-case
// long names (DECISION_TREE, ...).
std::string_view to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view name);
bool is_supported(ModelKind kind);

// Raised when an optional model kind was compiled out.
class UnsupportedModel : public std::runtime_error {
 public:
  explicit UnsupportedModel(ModelKind kind)
      : std::runtime_error("model kind '" + std::string(to_string(kind)) + "' is unsupported in this build") {}
};

// Defaults per kind. dt: max_depth 0 (unlimited), min_samples_split 2;
// knn: k 5; rf: n_estimators 100, max_depth 0, max_features 0 (sqrt), seed 0;
// gb: n_estimators 100, max_depth 9, learning_rate 0.05, max_bins 255.
nlohmann::json default_hyperparams(ModelKind kind);

struct Prediction {
  std::string cell_id;
  double confidence = 0.0;
};

class TrainedModel {
 public:
  ModelKind kind() const { return kind_; }
  const nlohmann::json& hyperparams() const { return hyperparams_; }
  const Encoder& encoder() const { return encoder_; }
  const std::vector<std::string>& labels() const { return labels_; }

  Prediction predict(const FeatureContext& features) const;

 private:
  friend std::shared_ptr<TrainedModel> train(ModelKind, std::span<const FeatureRow>, const nlohmann::json&,
                                             EncoderOptions);
  TrainedModel() = default;

  ModelKind kind_ = ModelKind::kDecisionTree;
  nlohmann::json hyperparams_;
  Encoder encoder_;
  std::vector<std::string> labels_;  // sorted; class index order
  std::unique_ptr<Classifier> classifier_;
};

// Fits the encoder and the classifier on `rows`. `overrides` replaces
// individual default hyperparameters; unknown keys are rejected.
std::shared_ptr<TrainedModel> train(ModelKind kind, std::span<const FeatureRow> rows,
                                    const nlohmann::json& overrides = nlohmann::json::object(),
                                    EncoderOptions options = {});

}  // namespace nwtb::predict
