#include "nwtb/predict/features.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace nwtb::predict {
namespace {

struct CellEntry {
  double time_s;
  std::string cell;
  TimeCategory category;
};

struct UeHistory {
  std::vector<CellEntry> entries;
  std::vector<std::string> visits;  // entries with consecutive repeats collapsed
};

void record_entry(UeHistory& h, const NetworkEvent& e, const std::string& cell) {
  h.entries.push_back({e.timestamp.offset_s, cell, time_category_of(e.timestamp)});
  if (h.visits.empty() || h.visits.back() != cell) h.visits.push_back(cell);
}

const CellInfo& lookup(const CellGeometry& geometry, const std::string& cell) {
  auto it = geometry.find(cell);
  if (it == geometry.end()) throw std::invalid_argument("cell '" + cell + "' missing from geometry");
  return it->second;
}

// nullopt when the UE has no entries in `category` yet.
std::optional<double> visit_frequency(const UeHistory& h, const std::string& cell, TimeCategory category) {
  std::size_t in_category = 0, into_cell = 0;
  for (const auto& entry : h.entries) {
    if (entry.category != category) continue;
    ++in_category;
    if (entry.cell == cell) ++into_cell;
  }
  if (!in_category) return std::nullopt;
  return static_cast<double>(into_cell) / static_cast<double>(in_category);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& text, std::size_t line_no) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": bad number '" + text + "'");
  }
  return v;
}

}  // namespace

std::vector<FeatureRow> build_dataset(std::span<const NetworkEvent> events,
                                      const CellGeometry& geometry) {
  std::vector<FeatureRow> rows;
  std::map<Supi, UeHistory> history;
  // Entries at the same offset as a later handover are held back until the
  // clock moves on, so features only ever see strictly earlier entries.
  std::map<Supi, std::vector<std::pair<const NetworkEvent*, std::string>>> pending;

  auto settle = [&](const Supi& supi, double before_s) {
    auto& queue = pending[supi];
    auto& h = history[supi];
    std::size_t kept = 0;
    for (auto& item : queue) {
      if (item.first->timestamp.offset_s < before_s) {
        record_entry(h, *item.first, item.second);
      } else {
        queue[kept++] = std::move(item);
      }
    }
    queue.resize(kept);
  };

  for (const auto& e : events) {
    if (const auto* loc = e.as<LocationReportPayload>()) {
      pending[e.supi].emplace_back(&e, loc->cell.id);
      continue;
    }
    const auto* ho = e.as<HandoverPayload>();
    if (!ho) continue;
    const double t = e.timestamp.offset_s;
    settle(e.supi, t);
    const auto& h = history[e.supi];
    if (h.visits.size() < 2) continue;

    FeatureRow row;
    row.features.supi = e.supi;
    row.features.prev_cell_1 = h.visits.back();
    row.features.prev_cell_2 = h.visits[h.visits.size() - 2];
    if (row.features.prev_cell_1 == ho->target.id) continue;
    row.features.time_category = time_category_of(e.timestamp);
    const auto frequency = visit_frequency(h, row.features.prev_cell_1, row.features.time_category);
    if (!frequency) continue;
    const auto& site = lookup(geometry, row.features.prev_cell_1);
    row.features.cell_x = site.position.x;
    row.features.cell_y = site.position.y;
    row.features.visit_frequency = *frequency;
    row.label = ho->target.id;
    row.label_time_s = t;
    row.features_as_of_s = h.entries.back().time_s;
    if (!(row.features_as_of_s < row.label_time_s)) {
      throw std::logic_error("feature leakage: entry at or after its label event");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<FeatureContext> current_context(std::span<const NetworkEvent> events, const Supi& supi,
                                              const SimInstant& now, const CellGeometry& geometry) {
  UeHistory h;
  for (const auto& e : events) {
    if (e.supi != supi) continue;
    if (const auto* loc = e.as<LocationReportPayload>()) record_entry(h, e, loc->cell.id);
  }
  if (h.visits.empty()) return std::nullopt;
  FeatureContext ctx;
  ctx.supi = supi;
  ctx.prev_cell_1 = h.visits.back();
  if (h.visits.size() >= 2) ctx.prev_cell_2 = h.visits[h.visits.size() - 2];
  ctx.time_category = time_category_of(now);
  const auto& site = lookup(geometry, ctx.prev_cell_1);
  ctx.cell_x = site.position.x;
  ctx.cell_y = site.position.y;
  ctx.visit_frequency = visit_frequency(h, ctx.prev_cell_1, ctx.time_category).value_or(0.0);
  return ctx;
}

void write_dataset_csv(const std::filesystem::path& path, std::span<const FeatureRow> rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << kDatasetCsvHeader << '\n';
  for (const auto& r : rows) {
    const auto& f = r.features;
    out << f.supi.value << ',' << f.prev_cell_1 << ',' << f.prev_cell_2 << ','
        << to_string(f.time_category) << ',' << format_double(f.cell_x) << ','
        << format_double(f.cell_y) << ',' << format_double(f.visit_frequency) << ',' << r.label
        << '\n';
  }
}

std::vector<FeatureRow> read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kDatasetCsvHeader) {
    throw std::runtime_error(path.string() + ": unexpected CSV header");
  }
  std::vector<FeatureRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cols = split_csv(line);
    if (cols.size() != 8) throw std::runtime_error("line " + std::to_string(line_no) + ": expected 8 columns");
    FeatureRow r;
    r.features.supi = Supi{cols[0]};
    r.features.prev_cell_1 = cols[1];
    r.features.prev_cell_2 = cols[2];
    const auto tc = parse_time_category(cols[3]);
    if (!tc) throw std::runtime_error("line " + std::to_string(line_no) + ": bad time category");
    r.features.time_category = *tc;
    r.features.cell_x = parse_double(cols[4], line_no);
    r.features.cell_y = parse_double(cols[5], line_no);
    r.features.visit_frequency = parse_double(cols[6], line_no);
    r.label = cols[7];
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace nwtb::predict
