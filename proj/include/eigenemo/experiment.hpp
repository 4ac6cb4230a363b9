#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eigenemo/ep_model.hpp"
#include "eigenemo/eval.hpp"
#include "eigenemo/method.hpp"

namespace eigenemo::eval {

/// Which EP streams feed a cell; Both concatenates EEP then BEP.
enum class EpChoice { EEP, BEP, Both };

EpChoice parse_ep_choice(std::string_view text);
std::string_view to_string(EpChoice ep);

struct Cell {
    MethodSpec method;
    EpChoice ep = EpChoice::EEP;
    bool plus_avg = false;  // append the plain average of each EP stream

    /// e.g. "dmd:d=1,2⊕avg & EEP⊕BEP"
    std::string label() const;
    std::string method_label() const;
    std::size_t length(std::size_t eep_dim, std::size_t bep_dim) const;
};

struct ExperimentConfig {
    std::vector<Cell> cells;
    CvConfig cv;
    ForestConfig forest;
};

/// Grid JSON:
///   {"grid": {"methods": [{"method": "dmd", "d": [1, 2, "1-3"]}, ...],
///             "ep": ["eep", "bep", "eep+bep"], "plus_avg": [false, true]},
///    "cells": [{"method": "pmeans", "powers": "1-2", "ep": "eep"}],
///    "cv": {"folds": 10, "seed": 0, "stratified": true},
///    "forest": {"trees": 100, "max_features": null, "min_samples_leaf": 1,
///               "bootstrap": true, "seed": 0}}
/// The grid expands as methods x ep x plus_avg; explicit cells follow.
ExperimentConfig parse_experiment(std::string_view json_text);

/// Representation of one utterance under a cell. bep may be null when the
/// cell uses only EEP, and vice versa.
Representation cell_representation(const Cell& cell, const EpSequence* eep, const EpSequence* bep);

/// Evaluates every cell. Utterances too short for a cell's method are
/// excluded from that cell and listed in its report's `skipped`.
std::vector<std::pair<std::string, EvalReport>> run_experiment(const ExperimentConfig& cfg, const Dataset& eep,
                                                               const Dataset& bep, std::size_t jobs = 1);

}  // namespace eigenemo::eval
