#include "nwtb/predict/evaluate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace nwtb::predict {
namespace {

Evaluation tabulate(std::string kind, nlohmann::json hyperparams, std::span<const FeatureRow> test,
                    const std::vector<std::string>& predicted) {
  Evaluation e;
  e.kind = std::move(kind);
  e.hyperparams = std::move(hyperparams);
  std::set<std::string> labels;
  for (std::size_t i = 0; i < test.size(); ++i) {
    labels.insert(test[i].label);
    labels.insert(predicted[i]);
  }
  e.labels.assign(labels.begin(), labels.end());
  e.confusion.assign(e.labels.size(), std::vector<std::size_t>(e.labels.size(), 0));
  auto index = [&](const std::string& label) {
    return static_cast<std::size_t>(std::lower_bound(e.labels.begin(), e.labels.end(), label) - e.labels.begin());
  };
  for (std::size_t i = 0; i < test.size(); ++i) {
    ++e.confusion[index(test[i].label)][index(predicted[i])];
    if (test[i].label == predicted[i]) ++e.correct;
  }
  e.total = test.size();
  e.accuracy = e.total ? static_cast<double>(e.correct) / static_cast<double>(e.total) : 0.0;
  return e;
}

}  // namespace

Evaluation evaluate(const TrainedModel& model, std::span<const FeatureRow> test) {
  if (test.empty()) throw std::invalid_argument("cannot evaluate on an empty test set");
  std::vector<std::string> predicted;
  predicted.reserve(test.size());
  for (const auto& row : test) predicted.push_back(model.predict(row.features).cell_id);
  return tabulate(std::string(to_string(model.kind())), model.hyperparams(), test, predicted);
}

Evaluation majority_baseline(std::span<const FeatureRow> train, std::span<const FeatureRow> test) {
  if (train.empty() || test.empty()) throw std::invalid_argument("baseline needs train and test rows");
  std::map<std::string, std::size_t> histogram;
  for (const auto& r : train) ++histogram[r.label];
  const auto best = std::max_element(histogram.begin(), histogram.end(),
                                     [](const auto& a, const auto& b) { return a.second < b.second; });
  const std::vector<std::string> predicted(test.size(), best->first);
  return tabulate("majority", nlohmann::json::object(), test, predicted);
}

nlohmann::json to_json(const Evaluation& e) {
  return {{"kind", e.kind},
          {"hyperparams", e.hyperparams},
          {"accuracy", e.accuracy},
          {"confusion", {{"labels", e.labels}, {"matrix", e.confusion}}}};
}

}  // namespace nwtb::predict
