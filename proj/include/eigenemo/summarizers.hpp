#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "eigenemo/ep_model.hpp"

namespace eigenemo::summarize {

struct PMeansConfig {
    std::vector<int> powers;  // distinct, ascending, each >= 1
};

struct DctConfig {
    std::size_t k = 1;  // coefficients kept per dimension
};

void check(const PMeansConfig& cfg);
void check(const DctConfig& cfg);

/// Column mean over frames (length m).
Representation average(const EpSequence& seq);

/// Per power p and dimension j: sign(M) |M|^(1/p) with M = mean(x_j^p).
/// Blocks are laid out power-major, length m * |powers|.
Representation p_means(const EpSequence& seq, const PMeansConfig& cfg);

/// Per dimension [mean, P1, Q1, Q2, Q3, P99] (length 6m).
Representation functionals(const EpSequence& seq);

/// Linear-interpolated percentile at rank q/100 * (n-1) of sorted values.
double percentile(std::span<const double> sorted, double q);

/// First k orthonormal DCT-II coefficients along time for each dimension,
/// after zero-padding to k frames when N < k. Dimension-major, length k*m.
Representation dct_summary(const EpSequence& seq, const DctConfig& cfg);

/// Orthonormal DCT-II of a single signal (all n coefficients).
std::vector<double> dct2(std::span<const double> signal);

/// Concatenates values in order; methods joined with "⊕". All parts must
/// share id and label.
Representation concat(std::span<const Representation> reps);

}  // namespace eigenemo::summarize
