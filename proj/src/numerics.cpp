#include "eigenemo/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "eigenemo/errors.hpp"

namespace eigenemo::numerics {

namespace {

// arg() with -0.0 imaginary parts folded to +0.0, so negative reals sort at +pi.
double signed_arg(std::complex<double> z) {
    return std::atan2(z.imag() == 0.0 ? 0.0 : z.imag(), z.real());
}

}  // namespace

bool all_finite(const RealMatrix& a) { return a.allFinite(); }

RealMatrix pseudoinverse(const RealMatrix& a, std::optional<double> rcond) {
    if (a.size() == 0) throw InvalidInput("pseudoinverse: empty matrix");
    if (!a.allFinite()) throw InvalidInput("pseudoinverse: non-finite entry in input");
    const double tol_rel =
        rcond.value_or(std::numeric_limits<double>::epsilon() *
                       static_cast<double>(std::max(a.rows(), a.cols())));
    if (!(tol_rel >= 0.0)) throw InvalidInput("pseudoinverse: rcond must be >= 0");

    Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double cutoff = tol_rel * (sigma.size() > 0 ? sigma(0) : 0.0);

    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) > cutoff) inv(i) = 1.0 / sigma(i);
    }
    RealMatrix out = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
    if (!out.allFinite()) throw NumericError("pseudoinverse: non-finite result");
    return out;
}

ComplexVector canonicalize(const ComplexVector& v) {
    if (!v.allFinite()) throw InvalidInput("canonicalize: non-finite entry");
    const double norm = v.norm();
    if (v.size() == 0 || norm == 0.0) throw InvalidInput("canonicalize: zero vector");

    Eigen::Index pivot = 0;
    double best = std::abs(v(0));
    for (Eigen::Index i = 1; i < v.size(); ++i) {
        const double m = std::abs(v(i));
        if (m > best) {
            best = m;
            pivot = i;
        }
    }
    const std::complex<double> phase = std::conj(v(pivot)) / best;
    ComplexVector out = (v * phase) / norm;
    out(pivot) = std::complex<double>(out(pivot).real(), 0.0);
    return out;
}

std::vector<EigenPair> eig(const RealMatrix& a) {
    if (a.rows() != a.cols()) throw ShapeError("eig: matrix must be square");
    if (a.size() == 0) throw ShapeError("eig: empty matrix");
    if (!a.allFinite()) throw InvalidInput("eig: non-finite entry in input");

    Eigen::EigenSolver<RealMatrix> solver(a, true);
    if (solver.info() != Eigen::Success) throw NumericError("eig: eigensolver did not converge");
    const Eigen::VectorXcd values = solver.eigenvalues();
    const Eigen::MatrixXcd vectors = solver.eigenvectors();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        const double mi = std::abs(values(i));
        const double mj = std::abs(values(j));
        if (mi != mj) return mi > mj;
        const double ai = signed_arg(values(i));
        const double aj = signed_arg(values(j));
        if (ai != aj) return ai < aj;
        return i < j;
    });

    std::vector<EigenPair> pairs;
    pairs.reserve(order.size());
    for (Eigen::Index idx : order) {
        pairs.push_back({values(idx), canonicalize(vectors.col(idx))});
    }
    return pairs;
}

}  // namespace eigenemo::numerics
