#include "eigenemo/synth.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "eigenemo/errors.hpp"
#include "eigenemo/parallel.hpp"
#include "eigenemo/random.hpp"

namespace eigenemo::synth {

namespace {

// Block b has radius kRadius0 - b * kRadiusStep; class c rotates block b by
// kAngle0 + c * kClassAngleStep + b * kBlockAngleStep.
constexpr double kRadius0 = 0.95;
constexpr double kRadiusStep = 0.15;
constexpr double kAngle0 = 0.25;
constexpr double kClassAngleStep = 0.45;
constexpr double kBlockAngleStep = 0.8;
// Basis rotation: Givens rotations on coordinate pairs (i, i+1) by kMix0 + c * kMixStep.
constexpr double kMix0 = 0.3;
constexpr double kMixStep = 0.55;

}  // namespace

std::string class_label(std::size_t class_index) { return "class" + std::to_string(class_index); }

double spectral_radius(const Eigen::MatrixXd& a) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
    if (solver.info() != Eigen::Success) throw NumericError("spectral radius: eigensolver failed");
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd rotation_decay_matrix(std::size_t dim, std::size_t class_index) {
    const auto m = static_cast<Eigen::Index>(dim);
    const auto c = static_cast<double>(class_index);
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index b = 0; 2 * b < m; ++b) {
        const double r = std::max(0.1, kRadius0 - kRadiusStep * static_cast<double>(b));
        const double theta = kAngle0 + kClassAngleStep * c + kBlockAngleStep * static_cast<double>(b);
        const Eigen::Index i = 2 * b;
        if (i + 1 < m) {
            block(i, i) = r * std::cos(theta);
            block(i, i + 1) = -r * std::sin(theta);
            block(i + 1, i) = r * std::sin(theta);
            block(i + 1, i + 1) = r * std::cos(theta);
        } else {
            block(i, i) = r;
        }
    }
    Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(m, m);
    const double phi = kMix0 + kMixStep * c;
    for (Eigen::Index i = 0; i + 1 < m; ++i) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Identity(m, m);
        g(i, i) = std::cos(phi);
        g(i, i + 1) = -std::sin(phi);
        g(i + 1, i) = std::sin(phi);
        g(i + 1, i + 1) = std::cos(phi);
        basis = g * basis;
    }
    return basis * block * basis.transpose();
}

SynthConfig default_benchmark() {
    SynthConfig cfg;
    cfg.classes = 4;
    cfg.utterances_per_class = 100;
    cfg.dim = 6;
    cfg.n_min = 8;
    cfg.n_max = 40;
    cfg.noise_sigma = 0.05;
    cfg.init_mean = 0.0;
    cfg.init_sigma = 1.0;
    cfg.seed = 42;
    for (std::size_t c = 0; c < cfg.classes; ++c) cfg.dynamics.push_back(rotation_decay_matrix(cfg.dim, c));
    return cfg;
}

void check(const SynthConfig& cfg) {
    if (cfg.classes < 2) throw ConfigError("synth: classes must be >= 2");
    if (cfg.utterances_per_class < 1) throw ConfigError("synth: utterances_per_class must be >= 1");
    if (cfg.dim < 1) throw ConfigError("synth: dim must be >= 1");
    if (cfg.n_min < 4) throw ConfigError("synth: n_min must be >= 4");
    if (cfg.n_max < cfg.n_min) throw ConfigError("synth: n_max must be >= n_min");
    if (!(cfg.noise_sigma >= 0.0) || !std::isfinite(cfg.noise_sigma)) {
        throw ConfigError("synth: noise_sigma must be finite and >= 0");
    }
    if (!std::isfinite(cfg.init_mean) || !(cfg.init_sigma >= 0.0) || !std::isfinite(cfg.init_sigma)) {
        throw ConfigError("synth: init_mean must be finite and init_sigma finite and >= 0");
    }
    if (cfg.dynamics.size() != cfg.classes) {
        throw ConfigError("synth: need one dynamics matrix per class (" + std::to_string(cfg.classes) +
                          "), got " + std::to_string(cfg.dynamics.size()));
    }
    const auto m = static_cast<Eigen::Index>(cfg.dim);
    for (std::size_t c = 0; c < cfg.dynamics.size(); ++c) {
        const auto& a = cfg.dynamics[c];
        if (a.rows() != m || a.cols() != m) {
            throw ConfigError("synth: dynamics matrix " + std::to_string(c) + " is not " +
                              std::to_string(cfg.dim) + "x" + std::to_string(cfg.dim));
        }
        if (!a.allFinite()) throw ConfigError("synth: dynamics matrix " + std::to_string(c) + " is not finite");
        const double rho = spectral_radius(a);
        if (rho > kMaxSpectralRadius + 1e-12) {
            throw ConfigError("synth: dynamics matrix " + std::to_string(c) + " has spectral radius " +
                              std::to_string(rho) + " > " + std::to_string(kMaxSpectralRadius));
        }
    }
}

SynthData generate(const SynthConfig& cfg, std::size_t jobs) {
    check(cfg);
    const std::size_t total = cfg.classes * cfg.utterances_per_class;
    const auto m = static_cast<Eigen::Index>(cfg.dim);
    std::vector<EpSequence> bep(total);
    std::vector<EpSequence> eep(total);

    parallel_for(total, jobs, [&](std::size_t u) {
        // Interleave classes so the file is not sorted by label.
        const std::size_t cls = u % cfg.classes;
        Rng rng(mix_seed(cfg.seed, u));
        const auto n = static_cast<Eigen::Index>(cfg.n_min + rng.below(cfg.n_max - cfg.n_min + 1));

        Eigen::VectorXd s(m);
        for (Eigen::Index j = 0; j < m; ++j) s(j) = cfg.init_mean + cfg.init_sigma * rng.normal();
        Eigen::MatrixXd frames(n, m);
        const Eigen::MatrixXd& a = cfg.dynamics[cls];
        for (Eigen::Index k = 0; k < n; ++k) {
            Eigen::VectorXd next = a * s;
            for (Eigen::Index j = 0; j < m; ++j) next(j) += cfg.noise_sigma * rng.normal();
            s = std::move(next);
            frames.row(k) = s.transpose();
        }

        char id[32];
        std::snprintf(id, sizeof id, "utt%05zu", u);
        bep[u] = EpSequence{id, class_label(cls), EpKind::BEP, frames};

        Eigen::MatrixXd probs(n, m);
        for (Eigen::Index k = 0; k < n; ++k) {
            const double peak = frames.row(k).maxCoeff();
            Eigen::RowVectorXd e = (frames.row(k).array() - peak).exp().matrix();
            probs.row(k) = e / e.sum();
        }
        eep[u] = EpSequence{id, class_label(cls), EpKind::EEP, std::move(probs)};
    });

    return {make_dataset(EpKind::EEP, std::move(eep)), make_dataset(EpKind::BEP, std::move(bep))};
}

SynthConfig config_from_json(std::string_view text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("synth config: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("synth config must be a JSON object");
    SynthConfig cfg = default_benchmark();
    try {
        cfg.classes = j.value("classes", cfg.classes);
        cfg.utterances_per_class = j.value("utterances_per_class", cfg.utterances_per_class);
        cfg.dim = j.value("dim", cfg.dim);
        cfg.n_min = j.value("n_min", cfg.n_min);
        cfg.n_max = j.value("n_max", cfg.n_max);
        cfg.noise_sigma = j.value("noise_sigma", cfg.noise_sigma);
        cfg.init_mean = j.value("init_mean", cfg.init_mean);
        cfg.init_sigma = j.value("init_sigma", cfg.init_sigma);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.dynamics.clear();
        if (j.contains("dynamics")) {
            for (const auto& mat : j.at("dynamics")) {
                const auto rows = mat.get<std::vector<std::vector<double>>>();
                Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()),
                                  static_cast<Eigen::Index>(rows.empty() ? 0 : rows[0].size()));
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    if (rows[r].size() != static_cast<std::size_t>(a.cols())) {
                        throw ConfigError("synth config: ragged dynamics matrix");
                    }
                    for (std::size_t c = 0; c < rows[r].size(); ++c) {
                        a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
                    }
                }
                cfg.dynamics.push_back(std::move(a));
            }
        } else {
            for (std::size_t c = 0; c < cfg.classes; ++c) cfg.dynamics.push_back(rotation_decay_matrix(cfg.dim, c));
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("synth config: ") + e.what());
    }
    check(cfg);
    return cfg;
}

std::string config_to_json(const SynthConfig& cfg) {
    nlohmann::json j;
    j["classes"] = cfg.classes;
    j["utterances_per_class"] = cfg.utterances_per_class;
    j["dim"] = cfg.dim;
    j["n_min"] = cfg.n_min;
    j["n_max"] = cfg.n_max;
    j["noise_sigma"] = cfg.noise_sigma;
    j["init_mean"] = cfg.init_mean;
    j["init_sigma"] = cfg.init_sigma;
    j["seed"] = cfg.seed;
    auto& dyn = j["dynamics"] = nlohmann::json::array();
    for (const auto& a : cfg.dynamics) {
        auto rows = nlohmann::json::array();
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            auto row = nlohmann::json::array();
            for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(a(r, c));
            rows.push_back(std::move(row));
        }
        dyn.push_back(std::move(rows));
    }
    return j.dump(2) + "\n";
}

}  // namespace eigenemo::synth
