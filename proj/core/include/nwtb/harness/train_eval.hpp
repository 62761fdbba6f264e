#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nwtb/predict/evaluate.hpp"
#include "nwtb/predict/split.hpp"

namespace nwtb::harness {

struct TrainEvalOptions {
  std::vector<std::string> models{"dt", "knn"};
  predict::SplitSpec split;
  predict::EncoderOptions encoder;
  std::optional<std::filesystem::path> meta_path;  // default: meta.json beside the log
};

struct ModelOutcome {
  std::string requested;
  std::optional<predict::Evaluation> evaluation;
  std::string error;  // "unsupported", "unknown model kind", ...
};

struct TrainEvalResult {
  std::size_t rows = 0;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  predict::Evaluation baseline;
  std::vector<ModelOutcome> outcomes;
};

// build_dataset -> split -> train -> evaluate for each requested model.
// Unknown or compiled-out kinds are reported per model; the rest still run.
// Throws std::runtime_error when the dataset is too small to split.
TrainEvalResult train_eval_rows(const std::vector<predict::FeatureRow>& rows, const TrainEvalOptions& options);
TrainEvalResult train_eval(const std::filesystem::path& log_path, const TrainEvalOptions& options);

// {rows, train_rows, test_rows, split, baseline, models: [...]}
nlohmann::json to_json(const TrainEvalResult& result, const TrainEvalOptions& options);
std::string format_table(const TrainEvalResult& result);

}  // namespace nwtb::harness
