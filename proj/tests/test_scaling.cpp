#include "support/fixtures.hpp"

#include <ratpencil/eigensolver.hpp>
#include <ratpencil/linearization.hpp>
#include <ratpencil/pencil_core.hpp>
#include <ratpencil/scaling.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace ratpencil;

namespace {

RationalQuadruple wide_range_quad(int i) {
    RationalQuadruple q = fixtures::random_quad(21, 1 + i % 3, 1 + i % 3, 1 + i % 6, i % 5, i);
    const double target = std::pow(10.0, -3.0 + 10.0 * (i % 37) / 36.0);
    q.A *= target / q.A.norm();
    return q;
}

// Entries k·2^e with small integer k, so every power-of-two multiple is exact.
RationalQuadruple dyadic_quad(int i) {
    RationalQuadruple q = fixtures::random_quad(22, 2, 2, 4, 2, i);
    auto snap = [i](Matrix& a, int shift) {
        for (Index j = 0; j < a.size(); ++j) {
            a.data()[j] = std::ldexp(std::round(a.data()[j].real() * 16.0), shift - 4);
        }
    };
    snap(q.A, i % 11);
    snap(q.B, -(i % 5));
    snap(q.C, i % 3);
    for (Matrix& d : q.D.coeffs) snap(d, i % 7 - 3);
    return q;
}

double quad_diff(const RationalQuadruple& a, const RationalQuadruple& b) {
    double s = (a.A - b.A).squaredNorm() + (a.B - b.B).squaredNorm() + (a.C - b.C).squaredNorm();
    for (std::size_t k = 0; k < a.D.coeffs.size(); ++k) s += (a.D.coeffs[k] - b.D.coeffs[k]).squaredNorm();
    return std::sqrt(s);
}

} // namespace

TEST(Scaling, LargeMultipleOfIdentity) {
    const RationalQuadruple q(1e4 * identity(5), Matrix::Ones(5, 1), Matrix::Ones(1, 5), PolyMatrix({identity(1)}));
    const auto [qh, sr] = scale_quadruple(q, false);
    EXPECT_NEAR(sr.d_lambda, 1.0 / (1e4 * std::sqrt(5.0)), 1e-20);
    EXPECT_NEAR(qh.A.norm(), 1.0, 1e-14);
}

TEST(Scaling, SmallAIsLeftAlone) {
    const RationalQuadruple q(0.25 * identity(2), identity(2), identity(2), PolyMatrix({identity(2)}));
    const auto [qh, sr] = scale_quadruple(q, true);
    EXPECT_EQ(sr.d_lambda, 1.0);
}

TEST(Scaling, NormsBoundedExactMode) {
    for (int i = 0; i < 50; ++i) {
        const auto [qh, sr] = scale_quadruple(wide_range_quad(i), false);
        EXPECT_LE(qh.A.norm(), 1.0 + 1e-14);
        EXPECT_LE(std::max({qh.B.norm(), qh.C.norm()}), 1.0 + 1e-14);
    }
}

TEST(Scaling, PowerOfTwoMode) {
    for (int i = 0; i < 100; ++i) {
        const RationalQuadruple q = wide_range_quad(i);
        const auto [qh, sr] = scale_quadruple(q, true);
        EXPECT_LE(qh.A.norm(), 2.0);
        EXPECT_TRUE(is_power_of_two(sr.d_lambda));
        EXPECT_TRUE(is_power_of_two(sr.d_R));
        double dn = 0.0;
        for (const Matrix& d : qh.D.coeffs) dn += d.squaredNorm();
        const double mx = std::max({qh.B.norm(), qh.C.norm(), std::sqrt(dn)});
        EXPECT_GE(mx, 0.5) << i;
        EXPECT_LE(mx, 1.0) << i;
    }
}

TEST(Scaling, PencilScalingCommutes) {
    for (int i = 0; i < 20; ++i) {
        const RationalQuadruple q = fixtures::random_quad(23, 2, 2, 3, 3, i);
        for (bool pow2 : {false, true}) {
            const auto [qh, sr] = scale_quadruple(q, pow2);
            const BlockKroneckerPencil a = scale_pencil(build_S(q, 1, 1), sr);
            const BlockKroneckerPencil b = build_S(qh, 1, 1);
            EXPECT_LE(norm(a.S - b.S), 1e-14 * norm(b.S));
        }
    }
}

TEST(Scaling, PowerOfTwoRoundTripIsExact) {
    for (int i = 0; i < 30; ++i) {
        const RationalQuadruple q = dyadic_quad(i);
        const auto [qh, sr] = scale_quadruple(q, true);
        EXPECT_EQ(quad_diff(unscale_quadruple(qh, sr), q), 0.0) << i;
    }
}

TEST(Scaling, ExactModeRoundTripIsClose) {
    const RationalQuadruple q = wide_range_quad(5);
    const auto [qh, sr] = scale_quadruple(q, false);
    EXPECT_LE(quad_diff(unscale_quadruple(qh, sr), q), 1e-14 * norm(q));
}

TEST(Scaling, EigenvaluesUnscale) {
    const RationalQuadruple q = fixtures::random_quad(24, 2, 2, 4, 3);
    const auto [qh, sr] = scale_quadruple(apply_profile(q, 1, 4), true);
    const auto z = zeros(apply_profile(q, 1, 4), 1, 1).finite();
    const auto zh = unscale_eigenvalues(zeros(qh, 1, 1).finite(), sr);
    EXPECT_LE(match_eigenvalues(z, zh, 1.0), 1e-6);
    const auto inf = unscale_eigenvalues({Complex(std::numeric_limits<double>::infinity(), 0.0)}, sr);
    EXPECT_TRUE(std::isinf(std::abs(inf[0])));
}

TEST(Scaling, PencilScalingDiagonalsArePositive) {
    const RationalQuadruple q = fixtures::random_quad(25, 2, 2, 4, 3);
    const auto [qh, sr] = scale_quadruple(q, true);
    const auto [dl, dr] = pencil_scalings(build_S(q, 1, 1).layout, sr);
    EXPECT_EQ(dl.size(), 10);
    EXPECT_EQ(dr.size(), 10);
    EXPECT_GT(dl.minCoeff(), 0.0);
    EXPECT_GT(dr.minCoeff(), 0.0);
}

TEST(Balance, EqualizesRowsAndColumns) {
    CounterRng rng(5, {5});
    Matrix A = fixtures::random_matrix(rng, 4, 4);
    A.row(0) *= 1e4;
    A.col(2) *= 1e-3;
    const RealVector t = balance(A, Matrix::Ones(4, 1), Matrix::Ones(1, 4), false);
    const Matrix At = t.cwiseInverse().asDiagonal() * A * t.asDiagonal();
    for (Index i = 0; i < 4; ++i) {
        const double r = std::sqrt(At.row(i).squaredNorm() - std::norm(At(i, i)));
        const double c = std::sqrt(At.col(i).squaredNorm() - std::norm(At(i, i)));
        EXPECT_NEAR(r / c, 1.0, 1e-2);
    }
    EXPECT_LT(At.norm(), A.norm());
}

TEST(IsPowerOfTwo, Basics) {
    EXPECT_TRUE(is_power_of_two(1.0));
    EXPECT_TRUE(is_power_of_two(0.125));
    EXPECT_TRUE(is_power_of_two(1024.0));
    EXPECT_FALSE(is_power_of_two(3.0));
    EXPECT_FALSE(is_power_of_two(0.0));
    EXPECT_FALSE(is_power_of_two(-2.0));
}
