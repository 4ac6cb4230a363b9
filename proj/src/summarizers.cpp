#include "eigenemo/summarizers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "eigenemo/errors.hpp"

namespace eigenemo::summarize {

void check(const PMeansConfig& cfg) {
    if (cfg.powers.empty()) throw ConfigError("p-means: power list is empty");
    for (std::size_t i = 0; i < cfg.powers.size(); ++i) {
        if (cfg.powers[i] < 1) throw ConfigError("p-means: powers must be >= 1");
        if (i && cfg.powers[i] <= cfg.powers[i - 1]) {
            throw ConfigError("p-means: powers must be distinct and ascending");
        }
    }
}

void check(const DctConfig& cfg) {
    if (cfg.k < 1) throw ConfigError("dct: k must be >= 1");
}

namespace {

// Sequential sum over frames; p-means with p = 1 must agree with this bit for bit.
double column_power_mean(const Eigen::MatrixXd& frames, Eigen::Index j, int p) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < frames.rows(); ++i) {
        acc += p == 1 ? frames(i, j) : std::pow(frames(i, j), p);
    }
    return acc / static_cast<double>(frames.rows());
}

}  // namespace

Representation average(const EpSequence& seq) {
    Representation rep{seq.id, seq.label, "avg", {}};
    rep.values.reserve(seq.dim());
    for (Eigen::Index j = 0; j < seq.frames.cols(); ++j) rep.values.push_back(column_power_mean(seq.frames, j, 1));
    return rep;
}

Representation p_means(const EpSequence& seq, const PMeansConfig& cfg) {
    check(cfg);
    std::string method = "pmeans:p=";
    for (std::size_t i = 0; i < cfg.powers.size(); ++i) {
        if (i) method += ',';
        method += std::to_string(cfg.powers[i]);
    }
    Representation rep{seq.id, seq.label, std::move(method), {}};
    rep.values.reserve(seq.dim() * cfg.powers.size());
    for (int p : cfg.powers) {
        for (Eigen::Index j = 0; j < seq.frames.cols(); ++j) {
            const double m = column_power_mean(seq.frames, j, p);
            // Signed root keeps odd powers of negative data real-valued.
            const double root = p == 1 ? m : std::copysign(std::pow(std::abs(m), 1.0 / p), m);
            rep.values.push_back(root);
        }
    }
    return rep;
}

double percentile(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw InvalidInput("percentile of empty sample");
    const double rank = q / 100.0 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    if (frac == 0.0) return sorted[lo];
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Representation functionals(const EpSequence& seq) {
    Representation rep{seq.id, seq.label, "functionals", {}};
    rep.values.reserve(6 * seq.dim());
    std::vector<double> col(seq.length());
    for (Eigen::Index j = 0; j < seq.frames.cols(); ++j) {
        for (Eigen::Index i = 0; i < seq.frames.rows(); ++i) col[static_cast<std::size_t>(i)] = seq.frames(i, j);
        std::sort(col.begin(), col.end());
        // Rounding in the running sum can push the mean an ulp outside the sample range.
        rep.values.push_back(std::clamp(column_power_mean(seq.frames, j, 1), col.front(), col.back()));
        for (double q : {1.0, 25.0, 50.0, 75.0, 99.0}) rep.values.push_back(percentile(col, q));
    }
    return rep;
}

std::vector<double> dct2(std::span<const double> signal) {
    const std::size_t n = signal.size();
    std::vector<double> out(n, 0.0);
    if (n == 0) return out;
    const double nd = static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            acc += signal[t] * std::cos(std::numbers::pi * (static_cast<double>(t) + 0.5) *
                                        static_cast<double>(k) / nd);
        }
        out[k] = acc * (k == 0 ? std::sqrt(1.0 / nd) : std::sqrt(2.0 / nd));
    }
    return out;
}

Representation dct_summary(const EpSequence& seq, const DctConfig& cfg) {
    check(cfg);
    Representation rep{seq.id, seq.label, "dct:k=" + std::to_string(cfg.k), {}};
    rep.values.reserve(cfg.k * seq.dim());
    const std::size_t padded = std::max(seq.length(), cfg.k);
    std::vector<double> col(padded, 0.0);
    for (Eigen::Index j = 0; j < seq.frames.cols(); ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        for (Eigen::Index i = 0; i < seq.frames.rows(); ++i) col[static_cast<std::size_t>(i)] = seq.frames(i, j);
        const std::vector<double> coef = dct2(col);
        rep.values.insert(rep.values.end(), coef.begin(), coef.begin() + static_cast<std::ptrdiff_t>(cfg.k));
    }
    return rep;
}

Representation concat(std::span<const Representation> reps) {
    if (reps.empty()) throw InvalidInput("concat: nothing to concatenate");
    Representation out{reps[0].id, reps[0].label, {}, {}};
    for (std::size_t i = 0; i < reps.size(); ++i) {
        const auto& r = reps[i];
        if (r.id != out.id || r.label != out.label) {
            throw PairingError("concat: representation '" + r.id + "' (" + r.label +
                               ") does not match '" + out.id + "' (" + out.label + ")");
        }
        if (i) out.method += "⊕";
        out.method += r.method;
        out.values.insert(out.values.end(), r.values.begin(), r.values.end());
    }
    return out;
}

}  // namespace eigenemo::summarize
