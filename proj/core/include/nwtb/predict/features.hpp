#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nwtb/domain/event.hpp"

namespace nwtb::predict {

struct CellInfo {
  CellId cell;
  Position position;
};

// Cell id -> site. The event log carries ids only; positions come from the
// scenario layout.
using CellGeometry = std::map<std::string, CellInfo>;

// Everything the classifier sees, without the label.
struct FeatureContext {
  Supi supi;
  std::string prev_cell_1;  // current (most recent) cell
  std::string prev_cell_2;  // cell visited before it; empty if none
  TimeCategory time_category = TimeCategory::kNight;
  double cell_x = 0.0;
  double cell_y = 0.0;
  double visit_frequency = 0.0;

  friend bool operator==(const FeatureContext&, const FeatureContext&) = default;
};

struct FeatureRow {
  FeatureContext features;
  std::string label;  // next handover target cell id
  // Offset of the labelling HANDOVER and of the latest event the features
  // used. Not part of the CSV.
  double label_time_s = 0.0;
  double features_as_of_s = 0.0;

  friend bool operator==(const FeatureRow& a, const FeatureRow& b) {
    return a.features == b.features && a.label == b.label;
  }
};

// One row per HANDOVER of a UE that had already visited two distinct cells.
// Features use only that UE's LOCATION_REPORT entries strictly earlier than
// the handover. visit_frequency = entries into the current cell during the
// handover's time category / all entries during that category; handovers
// with no earlier entry in their category yield no row. Throws
// std::invalid_argument for a cell missing from `geometry`.
std::vector<FeatureRow> build_dataset(std::span<const NetworkEvent> events,
                                      const CellGeometry& geometry);

// Features describing `supi` at `now`, for predicting its next target.
// visit_frequency is 0 without earlier entries in the current category.
// nullopt if the UE has never reported a location.
std::optional<FeatureContext> current_context(std::span<const NetworkEvent> events, const Supi& supi,
                                              const SimInstant& now, const CellGeometry& geometry);

inline constexpr std::string_view kDatasetCsvHeader =
    "supi,prev_cell_1,prev_cell_2,time_category,cell_x,cell_y,visit_frequency,label";

void write_dataset_csv(const std::filesystem::path& path, std::span<const FeatureRow> rows);
// Throws std::runtime_error on a header mismatch or malformed line.
std::vector<FeatureRow> read_dataset_csv(const std::filesystem::path& path);

}  // namespace nwtb::predict
