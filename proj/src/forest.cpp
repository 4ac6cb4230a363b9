#include <algorithm>
#include <cmath>
#include <numeric>

#include "eigenemo/errors.hpp"
#include "eigenemo/eval.hpp"
#include "eigenemo/parallel.hpp"
#include "eigenemo/random.hpp"

namespace eigenemo::eval {

std::size_t DecisionTree::predict(const Eigen::MatrixXd& x, Eigen::Index row) const {
    std::size_t at = 0;
    while (nodes_[at].feature >= 0) {
        const Node& n = nodes_[at];
        at = static_cast<std::size_t>(x(row, n.feature) <= n.threshold ? n.left : n.right);
    }
    return nodes_[at].label;
}

std::size_t DecisionTree::depth() const {
    if (nodes_.empty()) return 0;
    std::vector<std::size_t> level(nodes_.size(), 0);
    std::size_t deepest = 0;
    // Children are always appended after their parent.
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        deepest = std::max(deepest, level[i]);
        if (nodes_[i].feature >= 0) {
            level[static_cast<std::size_t>(nodes_[i].left)] = level[i] + 1;
            level[static_cast<std::size_t>(nodes_[i].right)] = level[i] + 1;
        }
    }
    return deepest;
}

class TreeBuilder {
public:
    TreeBuilder(const Eigen::MatrixXd& x, std::span<const std::size_t> y, std::size_t n_classes,
                std::size_t max_features, std::size_t min_leaf, std::uint64_t seed)
        : x_(x), y_(y), n_classes_(n_classes), max_features_(max_features), min_leaf_(min_leaf), rng_(seed) {
        features_.resize(static_cast<std::size_t>(x.cols()));
        std::iota(features_.begin(), features_.end(), 0);
    }

    DecisionTree build(std::vector<std::size_t> samples, bool bootstrap) {
        if (bootstrap) {
            const std::size_t n = samples.size();
            std::vector<std::size_t> drawn(n);
            for (auto& s : drawn) s = samples[rng_.below(n)];
            samples = std::move(drawn);
        }
        DecisionTree tree;
        tree.nodes_.emplace_back();
        grow(tree, 0, samples);
        return tree;
    }

private:
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double score = -1.0;  // sum over children of sum_c count_c^2 / n_child
    };

    std::vector<std::size_t> counts(std::span<const std::size_t> samples) const {
        std::vector<std::size_t> c(n_classes_, 0);
        for (std::size_t s : samples) ++c[y_[s]];
        return c;
    }

    static std::size_t majority(const std::vector<std::size_t>& c) {
        return static_cast<std::size_t>(std::max_element(c.begin(), c.end()) - c.begin());
    }

    Split best_split(std::span<const std::size_t> samples) {
        Split best;
        const std::size_t n = samples.size();
        std::vector<std::pair<double, std::size_t>> column(n);
        std::vector<std::size_t> left(n_classes_);
        std::vector<std::size_t> right(n_classes_);
        std::size_t visited = 0;

        // Visit features in random order; constant ones do not count toward max_features.
        for (std::size_t i = 0; i < features_.size() && visited < max_features_; ++i) {
            const std::size_t j = i + rng_.below(features_.size() - i);
            std::swap(features_[i], features_[j]);
            const auto f = static_cast<Eigen::Index>(features_[i]);

            for (std::size_t k = 0; k < n; ++k) column[k] = {x_(static_cast<Eigen::Index>(samples[k]), f), samples[k]};
            std::sort(column.begin(), column.end());
            if (column.front().first == column.back().first) continue;
            ++visited;

            std::fill(left.begin(), left.end(), 0);
            std::fill(right.begin(), right.end(), 0);
            for (const auto& [v, s] : column) ++right[y_[s]];
            double left_sq = 0.0;
            double right_sq = 0.0;
            for (std::size_t c = 0; c < n_classes_; ++c) right_sq += static_cast<double>(right[c] * right[c]);

            for (std::size_t pos = 1; pos < n; ++pos) {
                const std::size_t cls = y_[column[pos - 1].second];
                left_sq += static_cast<double>(2 * left[cls] + 1);
                right_sq -= static_cast<double>(2 * right[cls] - 1);
                ++left[cls];
                --right[cls];
                if (pos < min_leaf_ || n - pos < min_leaf_) continue;
                const double lo = column[pos - 1].first;
                const double hi = column[pos].first;
                if (!(lo < hi)) continue;
                const double score =
                    left_sq / static_cast<double>(pos) + right_sq / static_cast<double>(n - pos);
                if (score > best.score) {
                    double mid = lo + (hi - lo) / 2.0;
                    if (!(mid < hi)) mid = lo;
                    best = {static_cast<int>(f), mid, score};
                }
            }
        }
        return best;
    }

    void grow(DecisionTree& tree, std::size_t node, std::vector<std::size_t>& samples) {
        const auto c = counts(samples);
        tree.nodes_[node].label = majority(c);
        const bool pure = std::count_if(c.begin(), c.end(), [](std::size_t v) { return v > 0; }) <= 1;
        if (pure || samples.size() < 2 * min_leaf_) return;

        const Split split = best_split(samples);
        if (split.feature < 0) return;

        std::vector<std::size_t> lhs;
        std::vector<std::size_t> rhs;
        for (std::size_t s : samples) {
            (x_(static_cast<Eigen::Index>(s), split.feature) <= split.threshold ? lhs : rhs).push_back(s);
        }
        samples.clear();
        samples.shrink_to_fit();

        const auto left_id = static_cast<int>(tree.nodes_.size());
        tree.nodes_.emplace_back();
        const auto right_id = static_cast<int>(tree.nodes_.size());
        tree.nodes_.emplace_back();
        auto& n = tree.nodes_[node];
        n.feature = split.feature;
        n.threshold = split.threshold;
        n.left = left_id;
        n.right = right_id;
        grow(tree, static_cast<std::size_t>(left_id), lhs);
        grow(tree, static_cast<std::size_t>(right_id), rhs);
    }

    const Eigen::MatrixXd& x_;
    std::span<const std::size_t> y_;
    std::size_t n_classes_;
    std::size_t max_features_;
    std::size_t min_leaf_;
    Rng rng_;
    std::vector<std::size_t> features_;
};

std::size_t ForestModel::predict(const Eigen::MatrixXd& x, Eigen::Index row) const {
    std::vector<std::size_t> votes(n_classes_, 0);
    for (const auto& t : trees_) ++votes[t.predict(x, row)];
    return static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

std::vector<std::size_t> ForestModel::predict(const Eigen::MatrixXd& x) const {
    if (static_cast<std::size_t>(x.cols()) != n_features_) {
        throw ShapeError("forest expects " + std::to_string(n_features_) + " features, got " +
                         std::to_string(x.cols()));
    }
    std::vector<std::size_t> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index r = 0; r < x.rows(); ++r) out[static_cast<std::size_t>(r)] = predict(x, r);
    return out;
}

ForestModel train_forest(const Eigen::MatrixXd& x, std::span<const std::size_t> y, std::size_t n_classes,
                         const ForestConfig& cfg, std::size_t jobs) {
    if (cfg.trees < 1) throw ConfigError("forest needs at least one tree");
    if (cfg.min_samples_leaf < 1) throw ConfigError("min_samples_leaf must be >= 1");
    if (static_cast<std::size_t>(x.rows()) != y.size()) throw ShapeError("feature rows and label count differ");
    if (x.rows() == 0 || x.cols() == 0) throw TrainingError("empty training set");
    if (!x.allFinite()) throw TrainingError("non-finite feature value");
    std::vector<bool> present(n_classes, false);
    for (std::size_t label : y) {
        if (label >= n_classes) throw TrainingError("label index out of range");
        present[label] = true;
    }
    if (std::count(present.begin(), present.end(), true) < 2) {
        throw TrainingError("training data must contain at least two classes");
    }

    const auto p = static_cast<std::size_t>(x.cols());
    std::size_t max_features = cfg.max_features.value_or(
        static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(p)))));
    max_features = std::clamp<std::size_t>(max_features, 1, p);

    std::vector<std::size_t> all(y.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<DecisionTree> trees(cfg.trees);
    parallel_for(cfg.trees, jobs, [&](std::size_t t) {
        TreeBuilder builder(x, y, n_classes, max_features, cfg.min_samples_leaf, mix_seed(cfg.seed, t));
        trees[t] = builder.build(all, cfg.bootstrap);
    });
    return ForestModel(std::move(trees), n_classes, p);
}

Eigen::MatrixXd feature_matrix(std::span<const Representation> reps) {
    if (reps.empty()) return {};
    const std::size_t len = reps[0].values.size();
    Eigen::MatrixXd x(static_cast<Eigen::Index>(reps.size()), static_cast<Eigen::Index>(len));
    for (std::size_t r = 0; r < reps.size(); ++r) {
        if (reps[r].values.size() != len) {
            throw ValidationError("representation '" + reps[r].id + "' has length " +
                                  std::to_string(reps[r].values.size()) + ", expected " + std::to_string(len));
        }
        for (std::size_t c = 0; c < len; ++c) {
            x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = reps[r].values[c];
        }
    }
    return x;
}

ForestModel train_forest(std::span<const Representation> features, const std::vector<std::string>& class_set,
                         const ForestConfig& cfg, std::size_t jobs) {
    std::vector<std::size_t> y;
    y.reserve(features.size());
    for (const auto& r : features) {
        const auto it = std::find(class_set.begin(), class_set.end(), r.label);
        if (it == class_set.end()) throw ValidationError("label '" + r.label + "' not in class set");
        y.push_back(static_cast<std::size_t>(it - class_set.begin()));
    }
    return train_forest(feature_matrix(features), y, class_set.size(), cfg, jobs);
}

}  // namespace eigenemo::eval
