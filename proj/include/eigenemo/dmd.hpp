#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "eigenemo/ep_model.hpp"
#include "eigenemo/numerics.hpp"

namespace eigenemo::dmd {

using numerics::RealMatrix;

/// Delay-embedding window size d (d = 1 is standard first-order DMD).
class OrderParam {
public:
    explicit OrderParam(std::size_t d);
    std::size_t value() const noexcept { return d_; }
    friend bool operator==(OrderParam, OrderParam) = default;
    friend auto operator<=>(OrderParam, OrderParam) = default;

private:
    std::size_t d_;
};

struct Snapshots {
    RealMatrix x;  // stacked states 1 .. N-d
    RealMatrix y;  // stacked states 2 .. N-d+1
};

/// Delay-embedded snapshot pair. frames holds one frame per row (N x m);
/// column j of x is [s_j; s_{j+1}; ...; s_{j+d-1}] and y is x shifted by
/// one step. Throws TooShortError when N <= d.
Snapshots stack(const Eigen::MatrixXd& frames, OrderParam d);
Snapshots stack(const EpSequence& seq, OrderParam d);

struct KoopmanFit {
    OrderParam order;
    RealMatrix op;                               // (d*m) x (d*m)
    std::vector<numerics::EigenPair> eigenpairs;  // sorted, see numerics::eig
    double residual = 0.0;                        // ||Y - op X||_F
};

/// Least-squares operator op = Y X^+ over the delay-embedded snapshots.
KoopmanFit fit_koopman(const Eigen::MatrixXd& frames, OrderParam d);
KoopmanFit fit_koopman(const EpSequence& seq, OrderParam d);

/// Throws ConfigError unless d_set is nonempty, strictly ascending.
void check_order_set(std::span<const OrderParam> d_set);

std::vector<OrderParam> make_order_set(std::span<const std::size_t> ds);

std::string descriptor(std::span<const OrderParam> d_set);

/// 2 * m * sum(d).
std::size_t representation_length(std::size_t dim, std::span<const OrderParam> d_set);

/// Concatenation over d_set of [Re(v); Im(v)], v the canonicalized top
/// eigenvector of the order-d fit.
Representation representation(const EpSequence& seq, std::span<const OrderParam> d_set);

}  // namespace eigenemo::dmd
