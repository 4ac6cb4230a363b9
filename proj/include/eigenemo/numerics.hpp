#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace eigenemo::numerics {

using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;

struct EigenPair {
    std::complex<double> value;
    ComplexVector vector;  // unit norm, canonical phase
};

/// Moore-Penrose pseudoinverse via SVD. Singular values at or below
/// rcond * sigma_max are treated as zero. When rcond is not given it
/// defaults to machine epsilon * max(rows, cols).
RealMatrix pseudoinverse(const RealMatrix& a, std::optional<double> rcond = std::nullopt);

/// All eigenpairs of a square real matrix, sorted by modulus descending,
/// then argument ascending, then original solver index. Vectors are
/// canonicalized.
std::vector<EigenPair> eig(const RealMatrix& a);

/// Scales v to unit 2-norm and rotates its phase so the largest-modulus
/// entry (lowest index on ties) is real and nonnegative.
ComplexVector canonicalize(const ComplexVector& v);

bool all_finite(const RealMatrix& a);

}  // namespace eigenemo::numerics
