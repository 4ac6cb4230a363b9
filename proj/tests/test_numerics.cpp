#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "eigenemo/errors.hpp"
#include "eigenemo/numerics.hpp"
#include "eigenemo/random.hpp"

using namespace eigenemo;
using namespace eigenemo::numerics;

namespace {

RealMatrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    RealMatrix a(rows, cols);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
    return a;
}

// Relative Frobenius errors of the four Moore-Penrose conditions.
std::array<double, 4> mp_errors(const RealMatrix& a, const RealMatrix& p) {
    auto rel = [](const RealMatrix& lhs, const RealMatrix& rhs) {
        const double scale = std::max(rhs.norm(), 1e-300);
        return (lhs - rhs).norm() / scale;
    };
    const RealMatrix ap = a * p;
    const RealMatrix pa = p * a;
    return {rel(ap * a, a), rel(pa * p, p), rel(ap.transpose(), ap), rel(pa.transpose(), pa)};
}

}  // namespace

TEST(Pseudoinverse, IdentityIsItsOwnInverse) {
    const RealMatrix eye = RealMatrix::Identity(2, 2);
    EXPECT_TRUE(pseudoinverse(eye).isApprox(eye, 1e-15));
}

TEST(Pseudoinverse, RankDeficientDiagonal) {
    RealMatrix a(2, 2);
    a << 2, 0, 0, 0;
    RealMatrix expected(2, 2);
    expected << 0.5, 0, 0, 0;
    EXPECT_NEAR((pseudoinverse(a) - expected).norm(), 0.0, 1e-15);
}

TEST(Pseudoinverse, RandomTallMatrixSatisfiesMoorePenrose) {
    Rng rng(7);
    const RealMatrix a = random_matrix(rng, 5, 3);
    const RealMatrix p = pseudoinverse(a);
    ASSERT_EQ(p.rows(), 3);
    ASSERT_EQ(p.cols(), 5);
    for (double e : mp_errors(a, p)) EXPECT_LE(e, 1e-10);
}

TEST(Pseudoinverse, ExplicitCutoffDropsSmallSingularValues) {
    RealMatrix a(2, 2);
    a << 1, 0, 0, 1e-6;
    EXPECT_NEAR(pseudoinverse(a)(1, 1), 1e6, 1e-3);
    EXPECT_EQ(pseudoinverse(a, 1e-3)(1, 1), 0.0);
}

TEST(Pseudoinverse, RejectsNonFiniteAndEmpty) {
    RealMatrix a = RealMatrix::Ones(2, 2);
    a(0, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(pseudoinverse(a), InvalidInput);
    EXPECT_THROW(pseudoinverse(RealMatrix(0, 0)), InvalidInput);
    EXPECT_THROW(pseudoinverse(RealMatrix::Ones(2, 2), -1.0), InvalidInput);
}

TEST(Pseudoinverse, RankDeficientProductsProperty) {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto rows = static_cast<Eigen::Index>(1 + rng.below(12));
        const auto cols = static_cast<Eigen::Index>(1 + rng.below(12));
        const auto rank = static_cast<Eigen::Index>(1 + rng.below(std::min(rows, cols)));
        const RealMatrix a = random_matrix(rng, rows, rank) * random_matrix(rng, rank, cols);
        const RealMatrix p = pseudoinverse(a);
        for (double e : mp_errors(a, p)) ASSERT_LE(e, 1e-10) << rows << "x" << cols << " rank " << rank;
    }
}

TEST(Eig, DiagonalMatrix) {
    RealMatrix a(2, 2);
    a << 2, 0, 0, 0.5;
    const auto pairs = eig(a);
    ASSERT_EQ(pairs.size(), 2u);
    EXPECT_NEAR(std::abs(pairs[0].value - 2.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(pairs[1].value - 0.5), 0.0, 1e-14);
    EXPECT_NEAR((pairs[0].vector - Eigen::Vector2cd(1, 0)).norm(), 0.0, 1e-14);
    EXPECT_NEAR((pairs[1].vector - Eigen::Vector2cd(0, 1)).norm(), 0.0, 1e-14);
}

TEST(Eig, PlanarRotationHasConjugatePairOrderedByArgument) {
    RealMatrix a(2, 2);
    a << 0, 1, -1, 0;
    const auto pairs = eig(a);
    ASSERT_EQ(pairs.size(), 2u);
    EXPECT_NEAR(std::abs(pairs[0].value), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(pairs[1].value), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(pairs[0].value - std::complex<double>(0, -1)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(pairs[1].value - std::complex<double>(0, 1)), 0.0, 1e-14);
}

TEST(Eig, NegativeRealSortsAfterPositiveOfEqualModulus) {
    RealMatrix a(2, 2);
    a << -1, 0, 0, 1;
    const auto pairs = eig(a);
    EXPECT_EQ(pairs[0].value, std::complex<double>(1, 0));
    EXPECT_EQ(pairs[1].value.real(), -1.0);
}

TEST(Eig, RandomMatricesHaveSmallResiduals) {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = static_cast<Eigen::Index>(1 + rng.below(10));
        const RealMatrix a = random_matrix(rng, n, n);
        const auto pairs = eig(a);
        ASSERT_EQ(static_cast<Eigen::Index>(pairs.size()), n);
        const Eigen::MatrixXcd ac = a.cast<std::complex<double>>();
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto& p = pairs[i];
            EXPECT_LE((ac * p.vector - p.value * p.vector).norm(), 1e-8 * a.norm());
            EXPECT_NEAR(p.vector.norm(), 1.0, 1e-12);
            if (i) EXPECT_GE(std::abs(pairs[i - 1].value), std::abs(p.value));
        }
    }
}

TEST(Eig, OrderingIsReproducible) {
    Rng rng(5);
    const RealMatrix a = random_matrix(rng, 8, 8);
    const auto first = eig(a);
    const auto second = eig(a);
    ASSERT_EQ(first.size(), second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        EXPECT_EQ(first[i].value, second[i].value);
        EXPECT_EQ(first[i].vector, second[i].vector);
    }
}

TEST(Eig, RejectsNonSquare) {
    EXPECT_THROW(eig(RealMatrix::Ones(2, 3)), ShapeError);
}

TEST(Canonicalize, RotatesPhaseOfLargestEntry) {
    ComplexVector v(2);
    v << 0, std::complex<double>(0, 2);
    const ComplexVector c = canonicalize(v);
    EXPECT_EQ(c(0), std::complex<double>(0, 0));
    EXPECT_NEAR(std::abs(c(1) - 1.0), 0.0, 1e-15);
    EXPECT_EQ(c(1).imag(), 0.0);
}

TEST(Canonicalize, ScalesOnly) {
    ComplexVector v(2);
    v << 3, 0;
    const ComplexVector c = canonicalize(v);
    EXPECT_EQ(c(0), std::complex<double>(1, 0));
    EXPECT_EQ(c(1), std::complex<double>(0, 0));
}

TEST(Canonicalize, ModulusTiePicksLowestIndex) {
    ComplexVector v(2);
    v << std::complex<double>(1, 1), std::complex<double>(1, -1);
    const ComplexVector c = canonicalize(v);
    EXPECT_NEAR(c.norm(), 1.0, 1e-15);
    EXPECT_EQ(c(0).imag(), 0.0);
    EXPECT_NEAR(c(0).real(), std::numbers::sqrt2 / 2, 1e-15);
    EXPECT_NEAR(std::abs(c(1) - std::complex<double>(0, -std::numbers::sqrt2 / 2)), 0.0, 1e-15);
}

TEST(Canonicalize, RejectsZeroVector) {
    EXPECT_THROW(canonicalize(ComplexVector::Zero(3)), InvalidInput);
}

TEST(Canonicalize, IdempotentOnRandomVectors) {
    Rng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        ComplexVector v(1 + static_cast<Eigen::Index>(rng.below(8)));
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = {rng.normal(), rng.normal()};
        const ComplexVector once = canonicalize(v);
        const ComplexVector twice = canonicalize(once);
        EXPECT_LE((once - twice).cwiseAbs().maxCoeff(), 1e-15);

        Eigen::Index pivot = 0;
        once.cwiseAbs().maxCoeff(&pivot);
        EXPECT_EQ(once(pivot).imag(), 0.0);
        EXPECT_GE(once(pivot).real(), 0.0);
        EXPECT_NEAR(once.norm(), 1.0, 1e-12);
    }
}
