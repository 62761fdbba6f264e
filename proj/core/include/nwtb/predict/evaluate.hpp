#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nwtb/predict/model.hpp"

namespace nwtb::predict {

struct Evaluation {
  std::string kind;
  nlohmann::json hyperparams;
  double accuracy = 0.0;
  std::size_t correct = 0;
  std::size_t total = 0;
  // Sorted union of true and predicted labels; confusion[i][j] counts rows
  // with true label i predicted as j.
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> confusion;
};

Evaluation evaluate(const TrainedModel& model, std::span<const FeatureRow> test);

// Accuracy on `test` of always answering the most frequent training label
// (smallest label on ties).
Evaluation majority_baseline(std::span<const FeatureRow> train, std::span<const FeatureRow> test);

// {kind, hyperparams, accuracy, confusion: {labels, matrix}}
nlohmann::json to_json(const Evaluation& e);

}  // namespace nwtb::predict
