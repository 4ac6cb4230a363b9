#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eigenemo/ep_model.hpp"

namespace eigenemo::synth {

/// Synthetic EP corpus with known linear dynamics per class.
struct SynthConfig {
    std::size_t classes = 4;
    std::size_t utterances_per_class = 100;
    std::size_t dim = 6;
    std::size_t n_min = 8;
    std::size_t n_max = 40;
    std::vector<Eigen::MatrixXd> dynamics;  // one dim x dim matrix per class
    double noise_sigma = 0.05;
    double init_mean = 0.0;   // s_0 ~ init_mean * 1 + init_sigma * N(0, I)
    double init_sigma = 1.0;
    std::uint64_t seed = 42;
};

inline constexpr double kMaxSpectralRadius = 1.05;

/// Throws ConfigError on any violated invariant.
void check(const SynthConfig& cfg);

struct SynthData {
    Dataset eep;  // softmax of each state
    Dataset bep;  // raw states
};

/// Iterates s_k = A_class s_{k-1} + sigma * eps_k per utterance. Each
/// utterance draws from its own stream derived from (seed, index), so the
/// output does not depend on `jobs`.
SynthData generate(const SynthConfig& cfg, std::size_t jobs = 1);

/// Rotation-plus-decay generator for one class: an orthogonal change of
/// basis (class-specific) applied to a block diagonal of damped planar
/// rotations whose angles are class-specific.
Eigen::MatrixXd rotation_decay_matrix(std::size_t dim, std::size_t class_index);

/// 4 classes, m = 6, 100 utterances per class, N in [8, 40], sigma = 0.05, seed 42.
SynthConfig default_benchmark();

double spectral_radius(const Eigen::MatrixXd& a);

std::string class_label(std::size_t class_index);

SynthConfig config_from_json(std::string_view text);
std::string config_to_json(const SynthConfig& cfg);

}  // namespace eigenemo::synth
