#include <algorithm>

#include "eigenemo/errors.hpp"
#include "eigenemo/eval.hpp"
#include "eigenemo/parallel.hpp"
#include "eigenemo/random.hpp"

namespace eigenemo::eval {

Accuracy metrics(const ConfusionMatrix& confusion) {
    if (confusion.rows() != confusion.cols() || confusion.rows() == 0) {
        throw MetricError("confusion matrix must be square and nonempty");
    }
    if ((confusion.array() < 0).any()) throw MetricError("confusion matrix has negative counts");
    const std::int64_t total = confusion.sum();
    if (total == 0) throw MetricError("confusion matrix is all zero");

    double recall_sum = 0.0;
    std::size_t classes = 0;
    for (Eigen::Index c = 0; c < confusion.rows(); ++c) {
        const std::int64_t row = confusion.row(c).sum();
        if (row == 0) continue;
        recall_sum += static_cast<double>(confusion(c, c)) / static_cast<double>(row);
        ++classes;
    }
    return {static_cast<double>(confusion.trace()) / static_cast<double>(total),
            recall_sum / static_cast<double>(classes)};
}

EvalReport cross_validate(std::span<const Representation> reps, const std::vector<std::string>& class_set,
                          const CvConfig& cv, const ForestConfig& forest, std::size_t jobs) {
    const Eigen::MatrixXd x = feature_matrix(reps);
    std::vector<std::size_t> y;
    y.reserve(reps.size());
    for (const auto& r : reps) {
        const auto it = std::find(class_set.begin(), class_set.end(), r.label);
        if (it == class_set.end()) throw ValidationError("label '" + r.label + "' not in class set");
        y.push_back(static_cast<std::size_t>(it - class_set.begin()));
    }
    const std::size_t k = class_set.size();
    const auto folds = stratified_folds(y, k, cv);

    std::vector<ConfusionMatrix> fold_confusion(folds.size(), ConfusionMatrix::Zero(
                                                                  static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)));
    parallel_for(folds.size(), jobs, [&](std::size_t f) {
        const Fold& fold = folds[f];
        Eigen::MatrixXd train_x(static_cast<Eigen::Index>(fold.train.size()), x.cols());
        std::vector<std::size_t> train_y;
        train_y.reserve(fold.train.size());
        for (std::size_t i = 0; i < fold.train.size(); ++i) {
            train_x.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(fold.train[i]));
            train_y.push_back(y[fold.train[i]]);
        }
        ForestConfig fold_cfg = forest;
        fold_cfg.seed = mix_seed(forest.seed, f);
        const ForestModel model = train_forest(train_x, train_y, k, fold_cfg);
        for (std::size_t i : fold.test) {
            const std::size_t pred = model.predict(x, static_cast<Eigen::Index>(i));
            ++fold_confusion[f](static_cast<Eigen::Index>(y[i]), static_cast<Eigen::Index>(pred));
        }
    });

    EvalReport report;
    report.class_set = class_set;
    report.feature_length = static_cast<std::size_t>(x.cols());
    report.confusion = ConfusionMatrix::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (const auto& c : fold_confusion) {
        report.confusion += c;
        report.per_fold.push_back(metrics(c));
    }
    const Accuracy overall = metrics(report.confusion);
    report.wa = overall.wa;
    report.ua = overall.ua;
    return report;
}

}  // namespace eigenemo::eval
