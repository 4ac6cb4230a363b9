#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eigenemo/ep_model.hpp"

namespace eigenemo::eval {

// ---------------------------------------------------------------------------
// Cross-validation folds

struct CvConfig {
    std::size_t folds = 10;
    std::uint64_t seed = 0;
    bool stratified = true;
};

/// Sample indices of one fold.
struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Seeded k-fold split over samples with class indices `class_of`. When
/// stratified, each class is shuffled and dealt round-robin across folds,
/// continuing where the previous class stopped, so per-class and total fold
/// sizes differ by at most one. Throws ConfigError if folds < 2 or, when
/// stratified, a class has fewer members than folds.
std::vector<Fold> stratified_folds(std::span<const std::size_t> class_of, std::size_t n_classes,
                                   const CvConfig& cfg);

struct IdFold {
    std::vector<std::string> train;
    std::vector<std::string> test;
};

std::vector<IdFold> stratified_folds(const Dataset& dataset, const CvConfig& cfg);

// ---------------------------------------------------------------------------
// Random forest

struct ForestConfig {
    std::size_t trees = 100;
    std::optional<std::size_t> max_features;  // default floor(sqrt(p))
    std::size_t min_samples_leaf = 1;
    bool bootstrap = true;
    std::uint64_t seed = 0;
};

/// CART tree on Gini impurity. Samples with x[feature] <= threshold go left.
class DecisionTree {
public:
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        std::size_t label = 0;
    };

    std::size_t predict(const Eigen::MatrixXd& x, Eigen::Index row) const;
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t depth() const;

private:
    friend class TreeBuilder;
    std::vector<Node> nodes_;
};

class ForestModel {
public:
    ForestModel(std::vector<DecisionTree> trees, std::size_t n_classes, std::size_t n_features)
        : trees_(std::move(trees)), n_classes_(n_classes), n_features_(n_features) {}

    /// Majority vote; ties go to the lowest class index.
    std::size_t predict(const Eigen::MatrixXd& x, Eigen::Index row) const;
    std::vector<std::size_t> predict(const Eigen::MatrixXd& x) const;

    std::size_t tree_count() const { return trees_.size(); }
    std::size_t n_classes() const { return n_classes_; }
    std::size_t n_features() const { return n_features_; }

private:
    std::vector<DecisionTree> trees_;
    std::size_t n_classes_;
    std::size_t n_features_;
};

/// x holds one sample per row; y holds class indices in [0, n_classes).
/// Tree t draws from a stream derived from (cfg.seed, t), so `jobs` never
/// changes the fitted model.
ForestModel train_forest(const Eigen::MatrixXd& x, std::span<const std::size_t> y, std::size_t n_classes,
                         const ForestConfig& cfg, std::size_t jobs = 1);

/// Stacks representation values into a sample-per-row matrix. Throws
/// ValidationError on non-uniform length.
Eigen::MatrixXd feature_matrix(std::span<const Representation> reps);

/// Labels are resolved against class_set.
ForestModel train_forest(std::span<const Representation> features, const std::vector<std::string>& class_set,
                         const ForestConfig& cfg, std::size_t jobs = 1);

// ---------------------------------------------------------------------------
// Metrics

/// Rows are true classes, columns predicted classes.
using ConfusionMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

struct Accuracy {
    double wa = 0.0;  // trace / total
    double ua = 0.0;  // mean recall over classes with at least one instance
};

Accuracy metrics(const ConfusionMatrix& confusion);

// ---------------------------------------------------------------------------
// Cross-validated evaluation

struct Skipped {
    std::string id;
    std::string reason;
};

struct EvalReport {
    std::string label;
    std::vector<std::string> class_set;
    ConfusionMatrix confusion;
    double wa = 0.0;
    double ua = 0.0;
    std::vector<Accuracy> per_fold;
    std::vector<Skipped> skipped;
    std::size_t feature_length = 0;
};

/// Runs k-fold CV of the forest over one representation per utterance.
EvalReport cross_validate(std::span<const Representation> reps, const std::vector<std::string>& class_set,
                          const CvConfig& cv, const ForestConfig& forest, std::size_t jobs = 1);

}  // namespace eigenemo::eval
