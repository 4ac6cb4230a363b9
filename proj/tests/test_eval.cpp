#include <algorithm>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "eigenemo/errors.hpp"
#include "eigenemo/eval.hpp"
#include "eigenemo/experiment.hpp"
#include "eigenemo/random.hpp"
#include "eigenemo/report.hpp"
#include "eigenemo/synth.hpp"

using namespace eigenemo;
using namespace eigenemo::eval;

namespace {

std::vector<std::size_t> balanced_labels(std::size_t classes, std::size_t per_class) {
    std::vector<std::size_t> y;
    for (std::size_t i = 0; i < classes * per_class; ++i) y.push_back(i % classes);
    return y;
}

synth::SynthData small_benchmark(std::size_t per_class = 20) {
    auto cfg = synth::default_benchmark();
    cfg.utterances_per_class = per_class;
    return synth::generate(cfg);
}

}  // namespace

// ---------------------------------------------------------------------------
// Folds

TEST(Folds, BalancedTwoClassTenFold) {
    const auto y = balanced_labels(2, 10);
    const auto folds = stratified_folds(y, 2, {10, 1, true});
    ASSERT_EQ(folds.size(), 10u);
    for (const auto& f : folds) {
        ASSERT_EQ(f.test.size(), 2u);
        EXPECT_NE(y[f.test[0]], y[f.test[1]]);
        EXPECT_EQ(f.train.size(), 18u);
    }
}

TEST(Folds, PartitionProperty) {
    Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t classes = 2 + rng.below(5);
        const std::size_t folds = 2 + rng.below(9);
        std::vector<std::size_t> y;
        for (std::size_t c = 0; c < classes; ++c) {
            const std::size_t count = folds + rng.below(20);
            for (std::size_t i = 0; i < count; ++i) y.push_back(c);
        }
        Rng(rng.next()).shuffle(y.begin(), y.end());
        const bool stratified = trial % 3 != 0;
        const auto split = stratified_folds(y, classes, {folds, rng.next(), stratified});

        std::vector<int> seen(y.size(), 0);
        for (const auto& f : split) {
            for (std::size_t i : f.test) ++seen[i];
            std::set<std::size_t> train(f.train.begin(), f.train.end());
            for (std::size_t i : f.test) ASSERT_FALSE(train.count(i));
            ASSERT_EQ(f.train.size() + f.test.size(), y.size());
        }
        for (int s : seen) ASSERT_EQ(s, 1);

        if (stratified) {
            for (std::size_t c = 0; c < classes; ++c) {
                std::size_t lo = y.size();
                std::size_t hi = 0;
                for (const auto& f : split) {
                    const auto n = static_cast<std::size_t>(
                        std::count_if(f.test.begin(), f.test.end(), [&](std::size_t i) { return y[i] == c; }));
                    lo = std::min(lo, n);
                    hi = std::max(hi, n);
                }
                ASSERT_LE(hi - lo, 1u);
            }
        }
    }
}

TEST(Folds, DeterministicGivenSeed) {
    const auto y = balanced_labels(3, 15);
    const auto a = stratified_folds(y, 3, {5, 9, true});
    const auto b = stratified_folds(y, 3, {5, 9, true});
    const auto c = stratified_folds(y, 3, {5, 10, true});
    for (std::size_t f = 0; f < a.size(); ++f) EXPECT_EQ(a[f].test, b[f].test);
    bool differs = false;
    for (std::size_t f = 0; f < a.size(); ++f) differs |= a[f].test != c[f].test;
    EXPECT_TRUE(differs);
}

TEST(Folds, RejectsTooFewInstancesPerClass) {
    std::vector<std::size_t> y{0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1};
    EXPECT_THROW(stratified_folds(y, 2, {4, 0, true}), ConfigError);
    EXPECT_NO_THROW(stratified_folds(y, 2, {4, 0, false}));
    EXPECT_THROW(stratified_folds(y, 2, {1, 0, true}), ConfigError);
}

TEST(Folds, DatasetOverloadUsesIds) {
    const auto data = small_benchmark(10);
    const auto folds = stratified_folds(data.eep, {10, 3, true});
    std::set<std::string> ids;
    for (const auto& f : folds) {
        EXPECT_EQ(f.test.size(), 4u);
        ids.insert(f.test.begin(), f.test.end());
    }
    EXPECT_EQ(ids.size(), 40u);
}

// ---------------------------------------------------------------------------
// Forest

TEST(Forest, SeparableOneDimensionalData) {
    Eigen::MatrixXd x(4, 1);
    x << 0, 0.1, 0.9, 1.0;
    const std::vector<std::size_t> y{0, 0, 1, 1};

    // Oracle: brute-force search for a threshold separating the classes.
    bool separable = false;
    for (Eigen::Index t = 0; t < x.rows(); ++t) {
        bool ok = true;
        for (Eigen::Index i = 0; i < x.rows(); ++i) ok &= (x(i, 0) <= x(t, 0)) == (y[static_cast<std::size_t>(i)] == 0);
        separable |= ok;
    }
    ASSERT_TRUE(separable);

    ForestConfig cfg;
    cfg.trees = 5;
    cfg.seed = 1;
    const auto model = train_forest(x, y, 2, cfg);
    EXPECT_EQ(model.predict(x), y);
}

TEST(Forest, ConstantFeaturesFallBackToOneClass) {
    const auto y = balanced_labels(4, 10);
    const Eigen::MatrixXd x = Eigen::MatrixXd::Constant(40, 3, 0.5);
    const auto pred = train_forest(x, y, 4, {}).predict(x);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < y.size(); ++i) correct += pred[i] == y[i];
    EXPECT_TRUE(std::all_of(pred.begin(), pred.end(), [&](std::size_t p) { return p == pred[0]; }));
    EXPECT_DOUBLE_EQ(static_cast<double>(correct) / 40.0, 0.25);
}

TEST(Forest, UnanimousTieGoesToLowestClass) {
    // Without bootstrap every tree sees the same balanced root and votes class 0.
    const auto y = balanced_labels(3, 4);
    const Eigen::MatrixXd x = Eigen::MatrixXd::Zero(12, 2);
    ForestConfig cfg;
    cfg.bootstrap = false;
    const auto pred = train_forest(x, y, 3, cfg).predict(x);
    for (auto p : pred) EXPECT_EQ(p, 0u);
}

TEST(Forest, DeterministicAndJobIndependent) {
    Rng rng(3);
    Eigen::MatrixXd x(60, 5);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
    std::vector<std::size_t> y;
    for (Eigen::Index i = 0; i < 60; ++i) y.push_back(x(i, 0) + 0.3 * rng.normal() > 0 ? 1 : 0);
    ForestConfig cfg;
    cfg.seed = 11;
    const auto a = train_forest(x, y, 2, cfg, 1).predict(x);
    const auto b = train_forest(x, y, 2, cfg, 4).predict(x);
    EXPECT_EQ(a, b);
    Eigen::MatrixXd probe(200, 5);
    for (Eigen::Index i = 0; i < probe.size(); ++i) probe.data()[i] = rng.normal();
    EXPECT_EQ(train_forest(x, y, 2, cfg).predict(probe), train_forest(x, y, 2, cfg, 3).predict(probe));
}

TEST(Forest, FullyGrownTreesFitDistinctTrainingPoints) {
    Rng rng(4);
    Eigen::MatrixXd x(80, 4);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
    std::vector<std::size_t> y;
    for (int i = 0; i < 80; ++i) y.push_back(rng.below(3));
    ForestConfig cfg;
    cfg.bootstrap = false;
    cfg.max_features = 4;
    cfg.trees = 1;
    EXPECT_EQ(train_forest(x, y, 3, cfg).predict(x), y);
}

TEST(Forest, MinSamplesLeafLimitsDepth) {
    Rng rng(5);
    Eigen::MatrixXd x(64, 2);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
    std::vector<std::size_t> y;
    for (int i = 0; i < 64; ++i) y.push_back(rng.below(2));
    ForestConfig cfg;
    cfg.bootstrap = false;
    cfg.trees = 1;
    cfg.min_samples_leaf = 16;
    const auto model = train_forest(x, y, 2, cfg);
    EXPECT_LE(model.tree_count(), 1u);
    // At most 64 / 16 leaves, so not every training point can be fit.
    const auto pred = model.predict(x);
    EXPECT_NE(pred, y);
}

TEST(Forest, RejectsDegenerateInput) {
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(5, 2);
    const std::vector<std::size_t> one_class(5, 1);
    EXPECT_THROW(train_forest(x, one_class, 2, {}), TrainingError);
    EXPECT_THROW(train_forest(x, std::vector<std::size_t>{0, 1}, 2, {}), ShapeError);
    ForestConfig none;
    none.trees = 0;
    EXPECT_THROW(train_forest(x, std::vector<std::size_t>{0, 1, 0, 1, 0}, 2, none), ConfigError);
}

TEST(Forest, RepresentationOverloadResolvesLabels) {
    std::vector<Representation> reps{{"a", "lo", "m", {0.0}}, {"b", "lo", "m", {0.1}}, {"c", "hi", "m", {0.9}},
                                     {"d", "hi", "m", {1.0}}};
    const std::vector<std::string> classes{"hi", "lo"};
    ForestConfig cfg;
    cfg.trees = 5;
    const auto model = train_forest(reps, classes, cfg);
    const auto pred = model.predict(feature_matrix(reps));
    EXPECT_EQ(pred, (std::vector<std::size_t>{1, 1, 0, 0}));
    reps[1].values.push_back(2.0);
    EXPECT_THROW(feature_matrix(reps), ValidationError);
}

// ---------------------------------------------------------------------------
// Metrics

TEST(Metrics, HandArithmetic) {
    ConfusionMatrix c(2, 2);
    c << 9, 1, 2, 3;
    const auto m = metrics(c);
    EXPECT_DOUBLE_EQ(m.wa, 0.8);
    EXPECT_DOUBLE_EQ(m.ua, 0.75);
}

TEST(Metrics, PerfectClassifier) {
    ConfusionMatrix c = ConfusionMatrix::Zero(3, 3);
    c.diagonal() << 4, 7, 1;
    const auto m = metrics(c);
    EXPECT_EQ(m.wa, 1.0);
    EXPECT_EQ(m.ua, 1.0);
}

TEST(Metrics, BalancedClassesGiveEqualWaAndUa) {
    Rng rng(6);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto k = static_cast<Eigen::Index>(2 + rng.below(7));
        const auto per_class = static_cast<std::int64_t>(1 + rng.below(50));
        ConfusionMatrix c = ConfusionMatrix::Zero(k, k);
        for (Eigen::Index r = 0; r < k; ++r) {
            for (std::int64_t i = 0; i < per_class; ++i) ++c(r, static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(k))));
        }
        const auto m = metrics(c);
        EXPECT_NEAR(m.wa, m.ua, 1e-12);
    }
}

TEST(Metrics, AbsentClassesDoNotCountTowardUa) {
    ConfusionMatrix c(3, 3);
    c << 2, 0, 0, 0, 0, 0, 1, 0, 1;
    EXPECT_DOUBLE_EQ(metrics(c).ua, 0.75);
}

TEST(Metrics, RejectsDegenerateMatrices) {
    EXPECT_THROW(metrics(ConfusionMatrix::Zero(2, 2)), MetricError);
    EXPECT_THROW(metrics(ConfusionMatrix::Ones(2, 3)), MetricError);
    ConfusionMatrix neg = ConfusionMatrix::Ones(2, 2);
    neg(0, 1) = -1;
    EXPECT_THROW(metrics(neg), MetricError);
}

// ---------------------------------------------------------------------------
// Experiment grid

TEST(Experiment, OrderGridExpandsToFourteenCells) {
    const auto cfg = parse_experiment(R"({"grid": {"methods": [{"method": "dmd",
        "d": [1, 2, 3, 6, "1-2", "1-3", "1-6"]}], "ep": ["eep", "bep"]}})");
    ASSERT_EQ(cfg.cells.size(), 14u);
    EXPECT_EQ(cfg.cells[0].label(), "dmd:d=1 & EEP");
    EXPECT_EQ(cfg.cells[13].label(), "dmd:d=1,2,3,4,5,6 & BEP");
    EXPECT_EQ(cfg.cv.folds, 10u);
    EXPECT_EQ(cfg.forest.trees, 100u);
}

TEST(Experiment, ParsesAllMethodFamiliesAndSettings) {
    const auto cfg = parse_experiment(R"({
        "grid": {"methods": [{"method": "pmeans", "powers": [1, "1-2", "1-3", "1-6"]},
                             {"method": "dct", "k": [1, 2, 3, 4, 5, 6]},
                             {"method": "functionals"}],
                 "ep": ["eep", "bep", "eep+bep"]},
        "cells": [{"method": "dmd", "d": [1, 2], "ep": "eep+bep", "plus_avg": true}],
        "cv": {"folds": 5, "seed": 3, "stratified": false},
        "forest": {"trees": 7, "max_features": 2, "min_samples_leaf": 2, "bootstrap": false, "seed": 4}})");
    EXPECT_EQ(cfg.cells.size(), (4u + 6u + 1u) * 3u + 1u);
    EXPECT_EQ(cfg.cells.back().label(), "dmd:d=1,2⊕avg & EEP⊕BEP");
    EXPECT_EQ(cfg.cv.folds, 5u);
    EXPECT_FALSE(cfg.cv.stratified);
    EXPECT_EQ(cfg.forest.trees, 7u);
    EXPECT_EQ(cfg.forest.max_features, 2u);
    EXPECT_FALSE(cfg.forest.bootstrap);
}

TEST(Experiment, RejectsBadGrids) {
    EXPECT_THROW(parse_experiment("{}"), ConfigError);
    EXPECT_THROW(parse_experiment(R"({"cells": []})"), ConfigError);
    EXPECT_THROW(parse_experiment(R"({"cells": [{"method": "nope"}]})"), ConfigError);
    EXPECT_THROW(parse_experiment(R"({"cells": [{"method": "dmd"}]})"), ConfigError);
    EXPECT_THROW(parse_experiment(R"({"cells": [{"method": "dmd", "d": [2, 1]}]})"), ConfigError);
    EXPECT_THROW(parse_experiment(R"({"cells": [{"method": "avg", "plus_avg": true}]})"), ConfigError);
    EXPECT_THROW(parse_experiment(R"({"cells": [{"method": "avg", "ep": "xep"}]})"), ConfigError);
    EXPECT_THROW(parse_experiment("not json"), ConfigError);
}

TEST(Experiment, DmdPlusAvgLength) {
    const auto data = small_benchmark(2);
    const auto pairs = pair_eep_bep(data.eep, data.bep);
    const auto cfg = parse_experiment(R"({"cells": [
        {"method": "dmd", "d": "1-2", "ep": "eep", "plus_avg": true},
        {"method": "dmd", "d": "1-2", "ep": "eep+bep", "plus_avg": true}]})");
    const std::size_t m = 6;
    const auto single = cell_representation(cfg.cells[0], pairs[0].eep, pairs[0].bep);
    EXPECT_EQ(single.values.size(), 2 * m * 3 + m);
    EXPECT_EQ(cfg.cells[0].length(m, m), single.values.size());
    EXPECT_EQ(single.method, "dmd:d=1,2⊕avg");
    const auto both = cell_representation(cfg.cells[1], pairs[0].eep, pairs[0].bep);
    EXPECT_EQ(both.values.size(), 2 * (2 * m * 3 + m));
}

TEST(Experiment, SingleAverageCell) {
    const auto data = small_benchmark(20);
    auto cfg = parse_experiment(R"({"cells": [{"method": "avg", "ep": "eep"}], "forest": {"trees": 20}})");
    const auto reports = run_experiment(cfg, data.eep, data.bep);
    ASSERT_EQ(reports.size(), 1u);
    const auto& r = reports[0].second;
    EXPECT_EQ(reports[0].first, "avg & EEP");
    EXPECT_GE(r.wa, 0.0);
    EXPECT_LE(r.wa, 1.0);
    EXPECT_EQ(r.confusion.sum(), 80);
    for (Eigen::Index c = 0; c < r.confusion.rows(); ++c) EXPECT_EQ(r.confusion.row(c).sum(), 20);
    EXPECT_EQ(r.per_fold.size(), 10u);
    EXPECT_NEAR(r.wa, r.ua, 1e-12);
}

TEST(Experiment, ShortUtterancesAreSkippedAndListed) {
    const auto data = small_benchmark(20);
    auto cfg = parse_experiment(R"({"cells": [{"method": "dmd", "d": [1, 12], "ep": "bep"}],
                                    "cv": {"folds": 3}, "forest": {"trees": 10}})");
    std::size_t expected_skips = 0;
    for (const auto& s : data.bep.sequences) expected_skips += s.length() <= 12;
    ASSERT_GT(expected_skips, 0u);
    const auto reports = run_experiment(cfg, data.eep, data.bep);
    const auto& r = reports[0].second;
    EXPECT_EQ(r.skipped.size(), expected_skips);
    EXPECT_EQ(static_cast<std::size_t>(r.confusion.sum()), data.bep.size() - expected_skips);
    EXPECT_NE(r.skipped[0].reason.find("d=12"), std::string::npos);
}

TEST(Experiment, DeterministicAcrossRunsAndJobs) {
    const auto data = small_benchmark(15);
    const auto cfg = parse_experiment(R"({"grid": {"methods": [{"method": "dmd", "d": ["1-2"]},
        {"method": "functionals"}], "ep": ["eep", "eep+bep"]}, "forest": {"trees": 15, "seed": 2}})");
    const auto a = report::to_json(run_experiment(cfg, data.eep, data.bep, 1), cfg);
    const auto b = report::to_json(run_experiment(cfg, data.eep, data.bep, 4), cfg);
    EXPECT_EQ(a, b);
}

TEST(Experiment, RequiresPairedDatasets) {
    const auto data = small_benchmark(10);
    Dataset bep = data.bep;
    bep.sequences.pop_back();
    const auto cfg = parse_experiment(R"({"cells": [{"method": "avg"}]})");
    EXPECT_THROW(run_experiment(cfg, data.eep, bep), PairingError);
}

// ---------------------------------------------------------------------------
// Report rendering

TEST(Report, JsonRoundTripAndTablePrecision) {
    const auto data = small_benchmark(10);
    const auto cfg = parse_experiment(R"({"grid": {"methods": [{"method": "avg"}, {"method": "dct", "k": [2]}],
        "ep": ["eep", "bep"]}, "forest": {"trees": 10}})");
    const auto reports = run_experiment(cfg, data.eep, data.bep);
    const auto back = report::from_json(report::to_json(reports, cfg));
    ASSERT_EQ(back.size(), reports.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        EXPECT_EQ(back[i].first, reports[i].first);
        EXPECT_EQ(back[i].second.wa, reports[i].second.wa);
        EXPECT_EQ(back[i].second.confusion, reports[i].second.confusion);
        EXPECT_EQ(back[i].second.per_fold.size(), reports[i].second.per_fold.size());
    }
    const std::string table = report::render_table(back);
    for (const auto& [label, r] : back) {
        EXPECT_NE(table.find(report::percent(r.wa)), std::string::npos);
        EXPECT_NE(table.find(report::percent(r.ua)), std::string::npos);
    }
    EXPECT_NE(table.find("dct:k=2"), std::string::npos);
    EXPECT_NE(table.find("BEP"), std::string::npos);

    const std::string csv = report::render_confusion_csv(back);
    EXPECT_NE(csv.find("cell,true_label,class0,class1,class2,class3"), std::string::npos);
}

TEST(Report, PercentFormatting) {
    EXPECT_EQ(report::percent(0.92401), "92.40");
    EXPECT_EQ(report::percent(1.0), "100.00");
    EXPECT_EQ(report::percent(0.0), "0.00");
}

TEST(Experiment, EverySummarizerBeatsChanceOnBenchmark) {
    const auto data = synth::generate(synth::default_benchmark());
    const auto cfg = parse_experiment(R"({"grid": {"methods": [{"method": "avg"}, {"method": "pmeans", "powers": ["1-2"]},
        {"method": "functionals"}, {"method": "dct", "k": [3]}, {"method": "dmd", "d": ["1-2"]}],
        "ep": ["eep", "bep"]}})");
    const double chance = 1.0 / static_cast<double>(data.eep.class_set.size());
    for (const auto& [label, r] : run_experiment(cfg, data.eep, data.bep)) {
        EXPECT_GE(r.wa, chance + 0.15) << label;
        EXPECT_GE(r.ua, chance + 0.15) << label;
    }
}
