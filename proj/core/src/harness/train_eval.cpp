#include "nwtb/harness/train_eval.hpp"

#include <cstdio>
#include <sstream>

#include "nwtb/harness/simulation.hpp"
#include "nwtb/nwdaf/event_store.hpp"

namespace nwtb::harness {

TrainEvalResult train_eval_rows(const std::vector<predict::FeatureRow>& rows, const TrainEvalOptions& options) {
  if (rows.size() < predict::kMinSplitRows) {
    throw std::runtime_error("dataset too small: " + std::to_string(rows.size()) + " rows (need at least " +
                             std::to_string(predict::kMinSplitRows) + ")");
  }
  const auto split = predict::split_dataset(rows, options.split);
  TrainEvalResult result;
  result.rows = rows.size();
  result.train_rows = split.train.size();
  result.test_rows = split.test.size();
  result.baseline = predict::majority_baseline(split.train, split.test);
  for (const auto& name : options.models) {
    ModelOutcome outcome{name, std::nullopt, {}};
    const auto kind = predict::parse_model_kind(name);
    if (!kind) {
      outcome.error = "unknown model kind";
    } else if (!predict::is_supported(*kind)) {
      outcome.error = "unsupported";
    } else {
      const auto model = predict::train(*kind, split.train, nlohmann::json::object(), options.encoder);
      outcome.evaluation = predict::evaluate(*model, split.test);
    }
    result.outcomes.push_back(std::move(outcome));
  }
  return result;
}

TrainEvalResult train_eval(const std::filesystem::path& log_path, const TrainEvalOptions& options) {
  if (!std::filesystem::exists(log_path)) throw std::runtime_error("log not found: " + log_path.string());
  const auto meta = read_run_meta(options.meta_path.value_or(log_path.parent_path() / kMetaFile));
  const auto replay = nwdaf::replay_log(log_path);
  std::vector<NetworkEvent> events;
  events.reserve(replay.events.size());
  for (const auto& s : replay.events) events.push_back(s.event);
  return train_eval_rows(predict::build_dataset(events, meta.cells), options);
}

nlohmann::json to_json(const TrainEvalResult& result, const TrainEvalOptions& options) {
  nlohmann::json models = nlohmann::json::array();
  for (const auto& o : result.outcomes) {
    if (o.evaluation) {
      models.push_back(predict::to_json(*o.evaluation));
    } else {
      models.push_back({{"kind", o.requested}, {"error", o.error}});
    }
  }
  return {{"rows", result.rows},
          {"train_rows", result.train_rows},
          {"test_rows", result.test_rows},
          {"split",
           {{"train_fraction", options.split.train_fraction},
            {"seed", options.split.seed},
            {"strategy", options.split.strategy == predict::SplitStrategy::kRandom ? "random" : "chronological"}}},
          {"drop_supi", options.encoder.drop_supi},
          {"baseline", predict::to_json(result.baseline)},
          {"models", models}};
}

std::string format_table(const TrainEvalResult& result) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof(line), "rows=%zu train=%zu test=%zu\n", result.rows, result.train_rows, result.test_rows);
  out << line;
  std::snprintf(line, sizeof(line), "%-10s %10s\n", "model", "accuracy");
  out << line;
  std::snprintf(line, sizeof(line), "%-10s %9.2f%%\n", "majority", 100.0 * result.baseline.accuracy);
  out << line;
  for (const auto& o : result.outcomes) {
    if (o.evaluation) {
      std::snprintf(line, sizeof(line), "%-10s %9.2f%%\n", o.requested.c_str(), 100.0 * o.evaluation->accuracy);
    } else {
      std::snprintf(line, sizeof(line), "%-10s %10s\n", o.requested.c_str(), o.error.c_str());
    }
    out << line;
  }
  return out.str();
}

}  // namespace nwtb::harness
