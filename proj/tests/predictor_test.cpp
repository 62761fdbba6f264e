#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "nwtb/predict/classifier.hpp"
#include "nwtb/predict/evaluate.hpp"
#include "nwtb/predict/model.hpp"
#include "nwtb/predict/split.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace nwtb;
using namespace nwtb::predict;
using fixture::handover;
using fixture::location;

namespace {

constexpr double kMorning = 6 * 3600;

CellGeometry grid() {
  CellGeometry g;
  const std::pair<double, double> xy[] = {{0, 0}, {200, 0}, {0, 200}, {200, 200}, {100, 100}};
  for (int i = 0; i < 5; ++i) {
    const auto id = "C" + std::to_string(i + 1);
    g[id] = {{id, i + 1}, {xy[i].first, xy[i].second}};
  }
  return g;
}

// A UE moving through cells as the AMF would report it.
struct Walk {
  std::vector<NetworkEvent> events;
  std::map<std::string, std::string> serving;

  void move(double t, const std::string& supi, const std::string& cell) {
    auto it = serving.find(supi);
    if (it == serving.end()) {
      events.push_back(fixture::registration(t, supi, true));
      events.push_back(location(t, supi, cell));
    } else if (it->second != cell) {
      events.push_back(handover(t, supi, it->second, cell));
      events.push_back(location(t, supi, cell));
    }
    serving[supi] = cell;
  }
};

FeatureRow row(std::string supi, std::string p1, std::string p2, TimeCategory tc, double x, double y, double f,
               std::string label, double t = 0) {
  return {{Supi{std::move(supi)}, std::move(p1), std::move(p2), tc, x, y, f}, std::move(label), t, t - 1};
}

std::vector<FeatureRow> random_walk_rows(std::uint64_t seed, int steps) {
  std::mt19937_64 rng(seed);
  Walk w;
  double t = 0;
  for (int i = 0; i < steps; ++i) {
    t += 1 + static_cast<double>(rng() % 4000);
    w.move(t, "imsi-" + std::to_string(rng() % 3), "C" + std::to_string(1 + rng() % 5));
  }
  return build_dataset(w.events, grid());
}

}  // namespace

TEST(Dataset, ThreeCellExample) {
  Walk w;
  w.move(100, "u", "C1");
  w.move(200, "u", "C2");
  w.move(300, "u", "C3");
  const auto rows = build_dataset(w.events, grid());
  ASSERT_EQ(rows.size(), 1u);
  const auto& r = rows[0];
  EXPECT_EQ(r.features.prev_cell_1, "C2");
  EXPECT_EQ(r.features.prev_cell_2, "C1");
  EXPECT_EQ(r.label, "C3");
  EXPECT_EQ(r.features.time_category, TimeCategory::kNight);
  EXPECT_EQ(r.features.cell_x, 200.0);
  EXPECT_EQ(r.features.cell_y, 0.0);
  EXPECT_EQ(r.features.visit_frequency, 0.5);
  EXPECT_EQ(r.label_time_s, 300.0);
  EXPECT_EQ(r.features_as_of_s, 200.0);
}

TEST(Dataset, VisitFrequencyTwoOfEightMorningEntries) {
  std::vector<NetworkEvent> ev{fixture::registration(kMorning, "u", true)};
  const char* cells[] = {"C1", "C2", "C3", "C4", "C3", "C4", "C1", "C2"};
  for (int i = 0; i < 8; ++i) ev.push_back(location(kMorning + 60 * i, "u", cells[i]));
  ev.push_back(handover(kMorning + 600, "u", "C2", "C3"));
  ASSERT_EQ(ev.size(), 10u);
  const auto rows = build_dataset(ev, grid());
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].features.time_category, TimeCategory::kMorning);
  EXPECT_EQ(rows[0].features.visit_frequency, 0.25);
}

TEST(Dataset, SameInstantEntriesAreNotFeatures) {
  std::vector<NetworkEvent> ev{location(10, "u", "C1"), location(20, "u", "C2"), location(30, "u", "C4"),
                               handover(30, "u", "C2", "C3")};
  const auto rows = build_dataset(ev, grid());
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].features.prev_cell_1, "C2");
  EXPECT_EQ(rows[0].features_as_of_s, 20.0);
}

TEST(Dataset, UnknownCellThrows) {
  Walk w;
  w.move(1, "u", "C1");
  w.move(2, "u", "C9");
  w.move(3, "u", "C2");
  EXPECT_THROW(build_dataset(w.events, grid()), std::invalid_argument);
}

TEST(Dataset, FeaturesMatchOracleAndNeverLeak) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    Walk w;
    double t = 0;
    for (int i = 0; i < 400; ++i) {
      t += 1 + static_cast<double>(rng() % 4000);
      w.move(t, "imsi-" + std::to_string(rng() % 3), "C" + std::to_string(1 + rng() % 5));
    }
    const auto rows = build_dataset(w.events, grid());
    std::size_t k = 0;
    for (const auto& e : w.events) {
      const auto* ho = e.as<HandoverPayload>();
      if (!ho) continue;
      const double at = e.timestamp.offset_s;
      const auto cat = time_category_of(e.timestamp);
      std::vector<std::string> visits;
      std::size_t in_cat = 0, last = 0;
      for (const auto& x : w.events) {
        const auto* loc = x.as<LocationReportPayload>();
        if (!loc || x.supi != e.supi || !(x.timestamp.offset_s < at)) continue;
        if (visits.empty() || visits.back() != loc->cell.id) visits.push_back(loc->cell.id);
      }
      if (visits.size() < 2 || visits.back() == ho->target.id) continue;
      for (const auto& x : w.events) {
        const auto* loc = x.as<LocationReportPayload>();
        if (!loc || x.supi != e.supi || !(x.timestamp.offset_s < at) || time_category_of(x.timestamp) != cat) continue;
        ++in_cat;
        if (loc->cell.id == visits.back()) ++last;
      }
      if (in_cat == 0) continue;
      ASSERT_LT(k, rows.size());
      const auto& r = rows[k++];
      EXPECT_EQ(r.features.supi, e.supi);
      EXPECT_EQ(r.features.prev_cell_1, visits.back());
      EXPECT_EQ(r.features.prev_cell_2, visits[visits.size() - 2]);
      EXPECT_EQ(r.features.time_category, cat);
      EXPECT_EQ(r.features.visit_frequency, static_cast<double>(last) / static_cast<double>(in_cat));
      EXPECT_EQ(r.label, ho->target.id);
      EXPECT_LT(r.features_as_of_s, r.label_time_s);
    }
    EXPECT_EQ(k, rows.size());
  }
}

TEST(Dataset, CurrentContext) {
  Walk w;
  w.move(100, "u", "C1");
  EXPECT_FALSE(current_context(w.events, Supi{"v"}, {0, 200}, grid()));
  auto ctx = current_context(w.events, Supi{"u"}, {0, 200}, grid());
  ASSERT_TRUE(ctx);
  EXPECT_EQ(ctx->prev_cell_1, "C1");
  EXPECT_EQ(ctx->prev_cell_2, "");
  EXPECT_EQ(ctx->visit_frequency, 1.0);
  ctx = current_context(w.events, Supi{"u"}, {0, kMorning}, grid());
  EXPECT_EQ(ctx->visit_frequency, 0.0);
}

TEST(Dataset, CsvRoundTrip) {
  const auto rows = random_walk_rows(3, 500);
  ASSERT_GT(rows.size(), 50u);
  const auto path = std::filesystem::temp_directory_path() / "nwtb-dataset.csv";
  write_dataset_csv(path, rows);
  EXPECT_EQ(read_dataset_csv(path), rows);
  {
    std::ofstream out(path);
    out << "wrong,header\n";
  }
  EXPECT_THROW(read_dataset_csv(path), std::runtime_error);
}

TEST(Encoder, OneHotAndScaling) {
  const std::vector<FeatureRow> rows{row("a", "C1", "C2", TimeCategory::kMorning, 0, 0, 0.25, "C3"),
                                     row("b", "C2", "", TimeCategory::kNight, 200, 100, 0.75, "C1")};
  Encoder enc;
  enc.fit(rows);
  EXPECT_EQ(enc.column_names(),
            (std::vector<std::string>{"supi=a", "supi=b", "prev_cell_1=C1", "prev_cell_1=C2", "prev_cell_2=",
                                      "prev_cell_2=C2", "time_category=morning", "time_category=night", "cell_x",
                                      "cell_y", "visit_frequency"}));
  EXPECT_EQ(enc.width(), 11u);
  EXPECT_EQ(enc.encode(rows[1].features), (std::vector<double>{0, 1, 0, 1, 1, 0, 0, 1, 1, 1, 1}));
  std::size_t unseen = 0;
  const auto v = enc.encode(row("z", "C9", "C1", TimeCategory::kLunch, 100, 50, 0.5, "C1").features, &unseen);
  EXPECT_EQ(unseen, 4u);
  EXPECT_EQ(v, (std::vector<double>{0, 0, 0, 0, 0, 0, 0, 0, 0.5, 0.5, 0.5}));

  Encoder dropped(EncoderOptions{true});
  dropped.fit(rows);
  EXPECT_EQ(dropped.width(), 9u);
}

TEST(Split, PartitionProperties) {
  const auto rows = random_walk_rows(4, 600);
  ASSERT_GE(rows.size(), kMinSplitRows);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = split_dataset(rows, {0.7, seed, SplitStrategy::kRandom});
    EXPECT_EQ(s.train.size(), static_cast<std::size_t>(std::llround(0.7 * static_cast<double>(rows.size()))));
    EXPECT_EQ(s.train.size() + s.test.size(), rows.size());
    std::multiset<double> all, parts;
    for (const auto& r : rows) all.insert(r.label_time_s);
    for (const auto* part : {&s.train, &s.test})
      for (const auto& r : *part) parts.insert(r.label_time_s);
    EXPECT_EQ(all, parts);
    EXPECT_EQ(split_dataset(rows, {0.7, seed, SplitStrategy::kRandom}).train, s.train);
  }
  EXPECT_NE(split_dataset(rows, {0.7, 1}).train, split_dataset(rows, {0.7, 2}).train);
  const auto chrono = split_dataset(rows, {0.7, 0, SplitStrategy::kChronological});
  double latest_train = 0;
  for (const auto& r : chrono.train) latest_train = std::max(latest_train, r.label_time_s);
  for (const auto& r : chrono.test) EXPECT_GE(r.label_time_s, latest_train);
  EXPECT_THROW(split_dataset(std::span(rows).first(9), {}), std::invalid_argument);
  EXPECT_THROW(split_dataset(rows, {1.0, 0}), std::invalid_argument);
}

TEST(DecisionTree, MatchesReferenceTreeOnRandomData) {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 300; ++round) {
    const std::size_t n = 1 + rng() % 200, f = 1 + rng() % 3;
    const int k = 1 + static_cast<int>(rng() % 4);
    const bool coarse = rng() % 2;
    Matrix x{n, f, {}};
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n * f; ++i) {
      x.data.push_back(coarse ? static_cast<double>(rng() % 5) : std::ldexp(static_cast<double>(rng() % 100000), -10));
    }
    for (auto& v : y) v = static_cast<int>(rng() % k);
    DecisionTree tree;
    tree.fit(x, y, k);
    oracle::ReferenceTree ref;
    ref.fit(x, y, k);
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(tree.predict(x.row(i)).label, ref.predict(x.row(i))) << round;
    for (int probe = 0; probe < 50; ++probe) {
      std::vector<double> p(f);
      for (auto& v : p) v = coarse ? static_cast<double>(rng() % 11) / 2.0 - 0.5 : std::ldexp(static_cast<double>(rng() % 100000), -10);
      ASSERT_EQ(tree.predict(p).label, ref.predict(p)) << round;
    }
  }
}

TEST(DecisionTree, FitsTrainingDataAndRespectsDepth) {
  const Matrix x{4, 1, {0, 1, 2, 3}};
  const std::vector<int> y{0, 1, 0, 1};
  DecisionTree full;
  full.fit(x, y, 2);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(full.predict(x.row(i)).label, y[i]);
  DecisionTree stump(TreeParams{1});
  stump.fit(x, y, 2);
  EXPECT_EQ(stump.depth(), 1);
  DecisionTree single;
  single.fit(x, std::vector<int>{1, 1, 1, 1}, 2);
  EXPECT_EQ(single.nodes().size(), 1u);
  EXPECT_EQ(single.predict(std::vector<double>{7}).label, 1);
  EXPECT_EQ(single.predict(std::vector<double>{7}).confidence, 1.0);
}

TEST(Knn, VotesAndTies) {
  const Matrix x{5, 1, {0, 1, 2, 10, 11}};
  const std::vector<int> y{0, 1, 1, 2, 2};
  Knn one(KnnParams{1});
  one.fit(x, y, 3);
  EXPECT_EQ(one.predict(std::vector<double>{9}).label, 2);
  EXPECT_EQ(one.predict(std::vector<double>{0.4}).label, 0);
  Knn three(KnnParams{3});
  three.fit(x, y, 3);
  const auto v = three.predict(std::vector<double>{0.9});
  EXPECT_EQ(v.label, 1);
  EXPECT_DOUBLE_EQ(v.confidence, 2.0 / 3.0);
  Knn two(KnnParams{2});
  two.fit(x, y, 3);
  EXPECT_EQ(two.predict(std::vector<double>{0.5}).label, 0);  // 1 vs 1 goes to the smaller label
  Knn big(KnnParams{50});
  big.fit(x, y, 3);
  EXPECT_DOUBLE_EQ(big.predict(std::vector<double>{0}).confidence, 2.0 / 5.0);
}

TEST(Model, KindsAndOverrides) {
  EXPECT_EQ(parse_model_kind("dt"), ModelKind::kDecisionTree);
  EXPECT_EQ(parse_model_kind("GRADIENT_BOOSTING"), ModelKind::kGradientBoosting);
  EXPECT_FALSE(parse_model_kind("svm"));
  EXPECT_EQ(default_hyperparams(ModelKind::kKnn), (nlohmann::json{{"k", 5}}));
  const auto rows = random_walk_rows(5, 300);
  EXPECT_THROW(train(ModelKind::kKnn, rows, {{"depth", 3}}), std::invalid_argument);
  const auto m = train(ModelKind::kKnn, rows, {{"k", 1}});
  EXPECT_EQ(m->hyperparams()["k"], 1);
  EXPECT_TRUE(std::is_sorted(m->labels().begin(), m->labels().end()));
}

TEST(Model, SingleClassAndDeterminism) {
  std::vector<FeatureRow> same;
  for (int i = 0; i < 12; ++i) same.push_back(row("u", "C1", "C2", TimeCategory::kNight, i, 0, 0.5, "C4"));
  for (auto kind : {ModelKind::kDecisionTree, ModelKind::kKnn}) {
    const auto p = train(kind, same)->predict(same[0].features);
    EXPECT_EQ(p.cell_id, "C4");
    EXPECT_EQ(p.confidence, 1.0);
  }
  const auto rows = random_walk_rows(6, 800);
  const auto a = train(ModelKind::kDecisionTree, rows);
  const auto b = train(ModelKind::kDecisionTree, rows);
  for (const auto& r : rows) EXPECT_EQ(a->predict(r.features).cell_id, b->predict(r.features).cell_id);
}

TEST(Evaluate, ConfusionAndBaseline) {
  const std::vector<FeatureRow> train_rows{row("u", "C1", "C2", TimeCategory::kNight, 0, 0, 0, "C2"),
                                           row("u", "C1", "C2", TimeCategory::kNight, 0, 0, 0, "C3"),
                                           row("u", "C1", "C2", TimeCategory::kNight, 0, 0, 0, "C1")};
  const std::vector<FeatureRow> test_rows{row("u", "C1", "C2", TimeCategory::kNight, 0, 0, 0, "C1"),
                                          row("u", "C1", "C2", TimeCategory::kNight, 0, 0, 0, "C3")};
  const auto base = majority_baseline(train_rows, test_rows);
  EXPECT_EQ(base.kind, "majority");
  EXPECT_EQ(base.correct, 1u);
  EXPECT_EQ(base.accuracy, 0.5);
  EXPECT_EQ(base.labels, (std::vector<std::string>{"C1", "C3"}));
  EXPECT_EQ(base.confusion, (std::vector<std::vector<std::size_t>>{{1, 0}, {1, 0}}));
  const auto j = to_json(base);
  EXPECT_EQ(j["confusion"]["matrix"], nlohmann::json::parse("[[1,0],[1,0]]"));
}

#if NWTB_ENABLE_ENSEMBLES
TEST(Ensembles, SeparableDataIsLearned) {
  std::vector<FeatureRow> rows;
  for (int i = 0; i < 60; ++i) {
    const bool east = i % 2;
    rows.push_back(row("u", east ? "C2" : "C1", "C3", TimeCategory::kMorning, east ? 200 : 0, 0, 0.5,
                       east ? "C4" : "C3", i));
  }
  for (auto kind : {ModelKind::kRandomForest, ModelKind::kGradientBoosting}) {
    const auto m = train(kind, rows, {{"n_estimators", 20}});
    const auto e = evaluate(*m, rows);
    EXPECT_EQ(e.accuracy, 1.0) << to_string(kind);
  }
  GradientBoosting gb(BoostingParams{10, 3, 0.1, 16});
  const Matrix x{4, 1, {0, 1, 2, 3}};
  gb.fit(x, std::vector<int>{0, 0, 1, 1}, 2);
  const auto p = gb.predict_proba(std::vector<double>{3});
  EXPECT_NEAR(p[0] + p[1], 1.0, 1e-12);
  EXPECT_GT(p[1], 0.5);
}
#else
TEST(Ensembles, ReportedUnsupported) {
  EXPECT_FALSE(is_supported(ModelKind::kRandomForest));
  EXPECT_THROW(train(ModelKind::kGradientBoosting, std::vector<FeatureRow>{}), UnsupportedModel);
}
#endif
