#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <ratpencil/linalg.hpp>
#include <ratpencil/pencil_core.hpp>
#include <ratpencil/sylvester.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace ratpencil;

namespace {

using oracle::MatR;

MatR eye(Index n) { return MatR::Identity(n, n); }

MatR block2(const MatR& a, const MatR& b, const MatR& c, const MatR& d) {
    MatR out(a.rows() + c.rows(), a.cols() + b.cols());
    out << a, b, c, d;
    return out;
}

// Independent assembly of the reduced coefficient matrices from shift matrices.
MatR omega_reference(int which, int eps, int eta, int k, const MatR& A) {
    using oracle::kron;
    using oracle::shift_E;
    using oracle::shift_F;
    const Index ell = A.rows();
    switch (which) {
    case 1:
        return block2(kron<MatR>(A.transpose(), eye(eps)), kron<MatR>(eye(ell), shift_E(eps)),
                      kron<MatR>(eye(ell), eye(eps)), kron<MatR>(eye(ell), shift_F(eps)));
    case 2:
        return block2(kron<MatR>(shift_E(eta), eye(ell)), kron<MatR>(eye(eta), A), kron<MatR>(shift_F(eta), eye(ell)),
                      kron<MatR>(eye(eta), eye(ell)));
    case 3:
        return block2(kron<MatR>(shift_E(eta), eye(eps)), kron<MatR>(eye(eta), shift_E(eps)),
                      kron<MatR>(shift_F(eta), eye(eps)), kron<MatR>(eye(eta), shift_F(eps)));
    default:
        return block2(kron<MatR>(MatR(shift_E(k).transpose()), eye(k)), kron<MatR>(eye(k + 1), shift_E(k)),
                      kron<MatR>(MatR(shift_F(k).transpose()), eye(k)), kron<MatR>(eye(k + 1), shift_F(k)));
    }
}

} // namespace

TEST(Assemble, VecIdentity) {
    CounterRng rng(1, {1});
    const Pencil p1 = fixtures::random_pencil(rng, 2, 3);
    const Pencil p2 = fixtures::random_pencil(rng, 4, 2);
    const Matrix X = fixtures::random_complex(rng, 4, 2);
    const Matrix Y = fixtures::random_complex(rng, 2, 3);
    const Pencil lhs = X * p1 + p2 * Y;
    const SylvesterSystem sys = assemble(p1, p2, lhs);
    Vector xy(X.size() + Y.size());
    xy << vec(X), vec(Y);
    EXPECT_LE((sys.coeff * xy - sys.rhs).norm(), 1e-13 * sys.rhs.norm());
}

TEST(Assemble, ShapeMismatchRejected) {
    EXPECT_THROW(assemble(Pencil::zero(2, 3), Pencil::zero(4, 2), Pencil::zero(3, 3)), StructuralError);
}

TEST(MinNormSolve, ConsistentSystemSolvedExactly) {
    CounterRng rng(2, {1});
    const Pencil p1 = fixtures::random_pencil(rng, 2, 3);
    const Pencil p2 = fixtures::random_pencil(rng, 3, 4);
    const Pencil rhs = fixtures::random_complex(rng, 3, 2) * p1 + p2 * fixtures::random_complex(rng, 4, 3);
    const SylvesterSystem sys = assemble(p1, p2, rhs);
    const SylvesterSolution sol = min_norm_solve(sys);
    EXPECT_LE(sol.residual, 1e-12 * sys.rhs.norm());
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sys.coeff);
    const Vector ref = cod.solve(sys.rhs);
    Vector got(sol.X.size() + sol.Y.size());
    got << vec(sol.X), vec(sol.Y);
    EXPECT_LE((got - ref).norm(), 1e-11 * ref.norm());
}

TEST(RestoreEquivalence, RecoversSmallEquivalence) {
    CounterRng rng(3, {1});
    const Pencil target = structural_blocks(3, 2).Lkron;
    const Matrix X0 = 1e-6 * fixtures::random_complex(rng, 6, 6);
    const Matrix Y0 = 1e-6 * fixtures::random_complex(rng, 8, 8);
    const Pencil perturbed = (identity(6) + X0) * target * (identity(8) - Y0);
    const EquivalenceRestoration r = restore_equivalence(target, perturbed);
    EXPECT_TRUE(r.ok);
    const Pencil back = apply_equivalence(r.X, perturbed, r.Y);
    EXPECT_LE(norm(back - target), 1e-10);
}

TEST(RestoreEquivalence, SizeMismatchRejected) {
    EXPECT_THROW(restore_equivalence(Pencil::zero(2, 3), Pencil::zero(3, 3)), StructuralError);
}

TEST(Omega, MatricesMatchIndependentAssembly) {
    CounterRng rng(4, {1});
    const Matrix A = fixtures::random_matrix(rng, 3, 3);
    for (int a = 1; a <= 3; ++a) {
        for (int b = 1; b <= 3; ++b) {
            OmegaParams p;
            p.eps = a;
            p.eta = b;
            p.k = a;
            p.A = A;
            for (int w = 1; w <= 4; ++w) {
                const MatR ref = omega_reference(w, a, b, a, A.real());
                EXPECT_EQ(omega_matrix(w, p), Matrix(ref.cast<Complex>())) << "which=" << w;
            }
        }
    }
}

TEST(Omega, UnreducedRepeatsSingularValues) {
    OmegaParams p;
    p.eps = 2;
    p.eta = 1;
    p.m = 2;
    p.n = 3;
    p.k = 2;
    p.r = 3;
    p.A = identity(2);
    for (int w = 1; w <= 4; ++w) {
        EXPECT_NEAR(sigma_min(omega_matrix(w, p, false)), sigma_min(omega_matrix(w, p, true)), 1e-13);
    }
}

TEST(Omega, ThirdWithUnitIndices) {
    OmegaParams p;
    p.eps = p.eta = 1;
    const OmegaReport r = omega(3, p);
    EXPECT_NEAR(r.omega, std::numbers::sqrt2, 1e-14);
    EXPECT_NEAR(*r.exact, std::numbers::sqrt2, 1e-15);
}

TEST(Omega, FourthWithUnitIndex) {
    OmegaParams p;
    p.k = 1;
    const OmegaReport r = omega(4, p);
    EXPECT_NEAR(r.omega, 1.0, 1e-14);
    EXPECT_NEAR(r.lower_bound, 1.0, 1e-15);
}

TEST(Omega, ClosedFormsAgainstOracle) {
    for (int a = 1; a <= 4; ++a) {
        for (int b = 1; b <= 4; ++b) {
            const MatR W = omega_reference(3, a, b, 1, MatR());
            EXPECT_NEAR(oracle::sigma_min(W.cast<Complex>()), oracle::omega3_closed_form(a, b), 1e-12);
        }
        const MatR W4 = omega_reference(4, 1, 1, a, MatR());
        EXPECT_NEAR(oracle::sigma_min(W4.cast<Complex>()), oracle::omega4_closed_form(a), 1e-12);
    }
}

TEST(Omega, BoundsHoldForRandomA) {
    for (int t = 0; t < 20; ++t) {
        CounterRng rng(5, {static_cast<std::uint64_t>(t)});
        OmegaParams p;
        p.eps = 1 + t % 3;
        p.eta = 1 + (t / 3) % 3;
        p.k = 1 + t % 4;
        p.A = fixtures::random_complex(rng, 3, 3);
        p.A *= (0.5 + t % 3) / spectral_norm(p.A);
        for (int w = 1; w <= 4; ++w) EXPECT_TRUE(omega(w, p).holds()) << "which=" << w;
    }
}

TEST(Omega, VoidCasesRejected) {
    OmegaParams p;
    p.eps = 0;
    p.eta = 2;
    EXPECT_THROW(omega(3, p), ArgumentError);
    EXPECT_THROW(omega(5, p), ArgumentError);
    p.A = Matrix::Zero(2, 3);
    p.eps = 1;
    EXPECT_THROW(omega(1, p), ArgumentError);
}

TEST(Bidiagonal, ClosedForms) {
    for (int k = 1; k <= 6; ++k) {
        EXPECT_NEAR(sigma_min(bidiagonal_M(k)), oracle::bidiag_square_closed_form(k), 1e-13);
        EXPECT_NEAR(sigma_min(bidiagonal_N(k)), oracle::bidiag_wide_closed_form(k), 1e-13);
    }
}

TEST(Bidiagonal, SmallShapes) {
    Matrix m2(2, 2), n2(2, 3);
    m2 << 1, 1, 0, 1;
    n2 << 1, 1, 0, 0, 1, 1;
    EXPECT_EQ(bidiagonal_M(2), m2);
    EXPECT_EQ(bidiagonal_N(2), n2);
}

TEST(BidiagonalDecomposition, BlockSequenceAndPermutation) {
    for (Index k = 1; k <= 4; ++k) {
        const BidiagonalDecomposition dec = bidiagonal_decomposition(k);
        ASSERT_EQ(dec.blocks.size(), static_cast<std::size_t>(2 * k + 1));
        for (Index j = 1; j <= k; ++j) {
            EXPECT_EQ(dec.blocks[static_cast<std::size_t>(2 * j - 2)].kind, 'M');
            EXPECT_EQ(dec.blocks[static_cast<std::size_t>(2 * j - 2)].size, 2 * j - 1);
        }
        EXPECT_EQ(dec.blocks.back().kind, 'N');
        EXPECT_EQ(dec.blocks.back().size, 2 * k);
        EXPECT_EQ(dec.permuted, dec.direct_sum);
        OmegaParams p;
        p.k = k;
        const Matrix W = omega_matrix(4, p);
        EXPECT_EQ(permutation_matrix(dec.perm_rows) * W * permutation_matrix(dec.perm_cols).transpose(), dec.permuted);
        EXPECT_LE(dec.singular_value_gap, 1e-13);
    }
}
