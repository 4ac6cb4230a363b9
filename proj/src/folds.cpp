#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "eigenemo/errors.hpp"
#include "eigenemo/eval.hpp"
#include "eigenemo/random.hpp"

namespace eigenemo::eval {

std::vector<Fold> stratified_folds(std::span<const std::size_t> class_of, std::size_t n_classes,
                                   const CvConfig& cfg) {
    if (cfg.folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
    const std::size_t n = class_of.size();
    if (n < cfg.folds) {
        throw ConfigError("cannot split " + std::to_string(n) + " samples into " + std::to_string(cfg.folds) +
                          " folds");
    }

    std::vector<std::vector<std::size_t>> groups;
    if (cfg.stratified) {
        groups.resize(n_classes);
        for (std::size_t i = 0; i < n; ++i) {
            if (class_of[i] >= n_classes) throw ValidationError("class index out of range");
            groups[class_of[i]].push_back(i);
        }
        for (std::size_t c = 0; c < n_classes; ++c) {
            if (!groups[c].empty() && groups[c].size() < cfg.folds) {
                throw ConfigError("class " + std::to_string(c) + " has " + std::to_string(groups[c].size()) +
                                  " instances, fewer than " + std::to_string(cfg.folds) + " folds");
            }
        }
    } else {
        groups.emplace_back(n);
        std::iota(groups[0].begin(), groups[0].end(), std::size_t{0});
    }

    Rng rng(cfg.seed);
    std::vector<std::vector<std::size_t>> test(cfg.folds);
    std::size_t next_fold = 0;
    for (auto& g : groups) {
        rng.shuffle(g.begin(), g.end());
        for (std::size_t idx : g) {
            test[next_fold].push_back(idx);
            next_fold = (next_fold + 1) % cfg.folds;
        }
    }

    std::vector<std::size_t> fold_of(n);
    for (std::size_t f = 0; f < cfg.folds; ++f) {
        std::sort(test[f].begin(), test[f].end());
        for (std::size_t idx : test[f]) fold_of[idx] = f;
    }
    std::vector<Fold> out(cfg.folds);
    for (std::size_t f = 0; f < cfg.folds; ++f) {
        out[f].test = std::move(test[f]);
        out[f].train.reserve(n - out[f].test.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (fold_of[i] != f) out[f].train.push_back(i);
        }
    }
    return out;
}

std::vector<IdFold> stratified_folds(const Dataset& dataset, const CvConfig& cfg) {
    std::vector<std::size_t> class_of;
    class_of.reserve(dataset.size());
    for (const auto& s : dataset.sequences) class_of.push_back(dataset.class_index(s.label));
    const auto folds = stratified_folds(class_of, dataset.class_set.size(), cfg);

    std::vector<IdFold> out(folds.size());
    for (std::size_t f = 0; f < folds.size(); ++f) {
        for (std::size_t i : folds[f].train) out[f].train.push_back(dataset.sequences[i].id);
        for (std::size_t i : folds[f].test) out[f].test.push_back(dataset.sequences[i].id);
    }
    return out;
}

}  // namespace eigenemo::eval
