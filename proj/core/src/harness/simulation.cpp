#include "nwtb/harness/simulation.hpp"

#include <chrono>
#include <fstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "nwtb/mobility/rng.hpp"
#include "nwtb/nf/smf.hpp"
#include "nwtb/nwdaf/analytics.hpp"
#include "nwtb/sba/registry.hpp"

namespace nwtb::harness {
namespace {

constexpr std::uint64_t kTrafficStream = 0x7472616666696321ULL;

struct UeSim {
  mobility::UeAgent agent;
  mobility::Rng traffic_rng;
  std::optional<CellId> serving;
  bool reachable = false;
  std::optional<std::string> session;
  double last_report_s = 0.0;
};

class Simulation {
 public:
  Simulation(const Scenario& scenario, const RunOptions& options)
      : sc_(scenario),
        seed_(options.seed.value_or(scenario.seed)),
        transport_kind_(options.transport.value_or(scenario.transport)),
        out_dir_(options.output_dir.value_or(scenario.output_dir)),
        transport_(sba::make_transport(transport_kind_)),
        clock_(scenario.start_epoch_s),
        amf_(*transport_),
        smf_(*transport_) {}

  RunSummary run() {
    const auto wall_start = std::chrono::steady_clock::now();
    std::filesystem::create_directories(out_dir_);
    start();

    const auto ticks = sc_.ticks();
    for (std::uint64_t k = 1; k <= ticks; ++k) {
      const double t = static_cast<double>(k) * sc_.tick_dt_s;
      tick(t);
      if (sc_.acceleration) {
        std::this_thread::sleep_until(wall_start + std::chrono::duration<double>(t / *sc_.acceleration));
      }
    }
    // Let pending retries play out on the simulated clock.
    const double end = static_cast<double>(ticks) * sc_.tick_dt_s;
    for (double extra : {0.1, 1.0, 10.0, 100.0}) {
      amf_.exposure().dispatcher().poll(end + extra);
      smf_.exposure().dispatcher().poll(end + extra);
    }
    nwdaf_->shutdown();

    RunSummary summary = finish();
    summary.ticks = ticks;
    summary.runtime_wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    write_json(summary.summary_path, to_json(summary));
    return summary;
  }

 private:
  void start() {
    nrf_uri_ = transport_->bind("nrf", nrf_.handler());
    amf_.bind();
    smf_.bind();
    amf_.connect_smf(smf_.base_uri());
    amf_.set_areas_of_interest(sc_.areas_of_interest);
    sba::NrfClient nrf(*transport_, nrf_uri_);
    nrf.register_nf(amf_.profile());
    nrf.register_nf(smf_.profile());

    nwdaf::NwdafOptions nwdaf_options;
    nwdaf_options.log_path = out_dir_ / kLogFile;
    nwdaf_ = std::make_unique<nwdaf::Nwdaf>(*transport_, clock_, nrf_uri_, nwdaf_options);
    nwdaf_->bind();
    nwdaf_->start(sc_.nwdaf_config);

    for (const auto& behavior : sc_.ues) {
      ues_.push_back(UeSim{mobility::UeAgent(behavior, sc_.world, mobility::stream_seed(seed_, behavior.supi.value),
                                             sc_.start_epoch_s),
                           mobility::Rng(mobility::stream_seed(seed_ ^ kTrafficStream, behavior.supi.value)),
                           std::nullopt, false, std::nullopt, 0.0});
    }
    clock_.set(0.0);
    for (auto& ue : ues_) try_register(ue, 0.0);
  }

  void try_register(UeSim& ue, double t) {
    const auto best = ran::best_cell(ue.agent.position(), sc_.gnbs, sc_.radio);
    if (!best) return;
    const auto now = clock_.at(t);
    amf_.register_ue(ue.agent.supi(), best->cell, now);
    ue.serving = best->cell;
    ue.reachable = true;
    if (sc_.sessions.enabled) {
      ue.session = smf_.establish(ue.agent.supi(), sc_.sessions.dnn, best->cell, now).first;
      ue.last_report_s = t;
    }
    if (!sc_.areas_of_interest.empty()) amf_.update_position(ue.agent.supi(), ue.agent.position(), now);
  }

  void tick(double t) {
    clock_.set(t);
    const auto now = clock_.at(t);
    for (auto& ue : ues_) {
      const auto change = ue.agent.attach_detach_tick(t);
      if (change == mobility::PowerChange::kDetach && ue.serving) {
        amf_.deregister_ue(ue.agent.supi(), now);
        ue.serving.reset();
        ue.reachable = false;
        ue.session.reset();
      }
      if (!ue.agent.attached()) continue;
      ue.agent.advance(t, sc_.tick_dt_s);
      if (!ue.serving) {
        try_register(ue, t);
        continue;
      }
      const auto& pos = ue.agent.position();
      if (ue.reachable) {
        const auto decision = ran::handover_decision(*ue.serving, pos, sc_.gnbs, sc_.radio);
        if (const auto* ho = std::get_if<ran::HandoverTo>(&decision)) {
          amf_.handover(ue.agent.supi(), ho->target, now);
          ue.serving = ho->target;
        } else if (std::holds_alternative<ran::RadioLoss>(decision)) {
          amf_.radio_loss(ue.agent.supi(), now);
          ue.reachable = false;
        }
      } else if (const auto best = ran::best_cell(pos, sc_.gnbs, sc_.radio)) {
        amf_.radio_restore(ue.agent.supi(), best->cell, now);
        ue.serving = best->cell;
        ue.reachable = true;
      }
      if (!sc_.areas_of_interest.empty()) amf_.update_position(ue.agent.supi(), pos, now);
      if (ue.session && ue.reachable && t - ue.last_report_s >= sc_.sessions.report_interval_s) {
        const auto up = draw_bytes(ue.traffic_rng, sc_.sessions.bytes_up);
        const auto down = draw_bytes(ue.traffic_rng, sc_.sessions.bytes_down);
        smf_.traffic_tick(*ue.session, up, down, now);
        ue.last_report_s = t;
      }
    }
    for (const auto& q : sc_.qos_schedule) {
      if (!(q.at_s > t - sc_.tick_dt_s && q.at_s <= t)) continue;
      for (const auto& id : smf_.active_sessions(q.supi)) {
        if (smf_.session(id)->five_qi != q.five_qi) smf_.qos_change(id, q.five_qi, now);
      }
    }
    amf_.exposure().dispatcher().poll(t);
    smf_.exposure().dispatcher().poll(t);
  }

  static std::uint64_t draw_bytes(mobility::Rng& rng, const ByteRange& range) {
    return range.min + mobility::uniform_index(rng, range.max - range.min + 1);
  }

  static void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
  }

  RunSummary finish() {
    RunSummary s;
    s.transport = std::string(sba::to_string(transport_kind_));
    s.seed = seed_;
    for (const auto* exposure : {&amf_.exposure(), &smf_.exposure()}) {
      for (const auto& e : exposure->log()) ++s.events_emitted[std::string(to_string(e.kind))];
      s.events_emitted_total += exposure->log().size();
      s.notifications_dispatched += exposure->dispatched();
      const auto d = exposure->dispatcher().stats();
      s.notification_failures += d.dropped + d.rejected;
      s.notification_retries += d.retries;
    }
    s.events_collected = nwdaf_->store().size();
    s.nwdaf_metrics = nwdaf_->metrics();
    s.transport_stats = transport_->stats();

    RunMeta meta{sc_.start_utc, sc_.start_epoch_s, sc_.duration_s, sc_.tick_dt_s, seed_, cell_geometry(sc_.gnbs)};
    s.log_path = out_dir_ / kLogFile;
    s.meta_path = out_dir_ / kMetaFile;
    s.dataset_path = out_dir_ / kDatasetFile;
    s.analytics_path = out_dir_ / kAnalyticsFile;
    s.summary_path = out_dir_ / kSummaryFile;
    write_run_meta(s.meta_path, meta);

    const auto events = nwdaf_->store().events();
    const auto rows = predict::build_dataset(events, meta.cells);
    s.dataset_rows = rows.size();
    predict::write_dataset_csv(s.dataset_path, rows);
    write_json(s.analytics_path, nwdaf::to_json(nwdaf::compute_report(events, sc_.duration_s)));
    spdlog::info("run: {} ticks, {} events emitted, {} collected, {} dataset rows", sc_.ticks(),
                 s.events_emitted_total, s.events_collected, s.dataset_rows);
    return s;
  }

  const Scenario& sc_;
  std::uint64_t seed_;
  sba::TransportKind transport_kind_;
  std::filesystem::path out_dir_;
  std::unique_ptr<sba::Transport> transport_;
  SimClock clock_;
  sba::NrfRegistry nrf_;
  std::string nrf_uri_;
  nf::Amf amf_;
  nf::Smf smf_;
  std::unique_ptr<nwdaf::Nwdaf> nwdaf_;
  std::vector<UeSim> ues_;
};

}  // namespace

nlohmann::json to_json(const RunSummary& s) {
  return {
      {"events_emitted", s.events_emitted},
      {"events_emitted_total", s.events_emitted_total},
      {"notifications_dispatched", s.notifications_dispatched},
      {"events_collected", s.events_collected},
      {"notification_failures", s.notification_failures},
      {"notification_retries", s.notification_retries},
      {"ticks", s.ticks},
      {"dataset_rows", s.dataset_rows},
      {"runtime_wall_s", s.runtime_wall_s},
      {"transport", s.transport},
      {"seed", s.seed},
      {"nwdaf",
       {{"received", s.nwdaf_metrics.received},
        {"rejected", s.nwdaf_metrics.rejected},
        {"malformed", s.nwdaf_metrics.malformed},
        {"mean_subscribe_ack_ms", s.nwdaf_metrics.mean_subscribe_ack_ms()},
        {"mean_notification_ms", s.nwdaf_metrics.mean_notification_ms()}}},
      {"transport_stats",
       {{"requests", s.transport_stats.requests},
        {"transport_errors", s.transport_stats.transport_errors},
        {"wall_seconds", s.transport_stats.wall_seconds}}},
      {"paths",
       {{"log", s.log_path.string()},
        {"meta", s.meta_path.string()},
        {"dataset", s.dataset_path.string()},
        {"analytics", s.analytics_path.string()}}},
  };
}

nlohmann::json to_json(const RunMeta& meta) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& [id, info] : meta.cells) {
    cells.push_back({{"id", id}, {"tac", info.cell.tac}, {"x", info.position.x}, {"y", info.position.y}});
  }
  return {{"start_utc", meta.start_utc},   {"start_epoch_s", meta.start_epoch_s}, {"duration_s", meta.duration_s},
          {"tick_dt_s", meta.tick_dt_s}, {"seed", meta.seed},                    {"cells", cells}};
}

RunMeta run_meta_from_json(const nlohmann::json& j) {
  RunMeta meta;
  meta.start_utc = j.at("start_utc").get<std::string>();
  meta.start_epoch_s = j.at("start_epoch_s").get<std::int64_t>();
  meta.duration_s = j.at("duration_s").get<double>();
  meta.tick_dt_s = j.value("tick_dt_s", 1.0);
  meta.seed = j.value("seed", std::uint64_t{0});
  for (const auto& c : j.at("cells")) {
    const auto id = c.at("id").get<std::string>();
    meta.cells[id] = {CellId{id, c.at("tac").get<int>()}, Position{c.at("x").get<double>(), c.at("y").get<double>()}};
  }
  return meta;
}

void write_run_meta(const std::filesystem::path& path, const RunMeta& meta) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json(meta).dump(2) << '\n';
}

RunMeta read_run_meta(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return run_meta_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

RunSummary run(const Scenario& scenario, const RunOptions& options) {
  validate(scenario);
  Simulation sim(scenario, options);
  return sim.run();
}

}  // namespace nwtb::harness
