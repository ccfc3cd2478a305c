#pragma once

#include "ratpencil/pencil_core.hpp"
#include "ratpencil/types.hpp"

#include <optional>
#include <vector>

namespace ratpencil {

/// p1 is m1×n1, p2 is m2×n2; unknowns X (m2×m1) and Y (n2×n1).
struct SylvesterShape {
    Index m1 = 0;
    Index n1 = 0;
    Index m2 = 0;
    Index n2 = 0;
};

/// coeff·[vec X; vec Y] = rhs encodes X·p1(λ) + p2(λ)·Y = Δ(λ) coefficientwise.
struct SylvesterSystem {
    Matrix coeff;
    Vector rhs;
    SylvesterShape shape;
};

SylvesterSystem assemble(const Pencil& p1, const Pencil& p2, const Pencil& delta);

struct SylvesterSolution {
    Matrix X;
    Matrix Y;
    double residual = 0.0;
    /// σ_{2·m2·n1}(coeff), or 0 when coeff has fewer columns than rows.
    double sigma_min = 0.0;
};

/// Minimum Frobenius norm least-squares solution through the SVD.
SylvesterSolution min_norm_solve(const SylvesterSystem& sys);

struct EquivalenceRestoration {
    Matrix X;
    Matrix Y;
    bool ok = false;
    double residual = 0.0;
};

/// Finds X, Y with (I+X)⁻¹·perturbed·(I−Y) = target.
EquivalenceRestoration restore_equivalence(const Pencil& target, const Pencil& perturbed);

/// (I+X)⁻¹·p·(I−Y).
Pencil apply_equivalence(const Matrix& X, const Pencil& p, const Matrix& Y);

struct OmegaParams {
    Index eps = 0;
    Index eta = 0;
    Index k = 0;
    Index m = 1;
    Index n = 1;
    /// Identity size r of the K ⊗ I_r variant of the fourth quantity.
    Index r = 1;
    Matrix A;
};

struct OmegaReport {
    int which = 0;
    double omega = 0.0;
    double lower_bound = 0.0;
    std::optional<double> exact;
    OmegaParams params;
    double normA = 0.0;

    bool holds(double tol = 1e-12) const { return omega >= lower_bound - tol; }
};

/// The coefficient matrix behind ω_which. The reduced form drops identity
/// Kronecker factors that only repeat singular values.
Matrix omega_matrix(int which, const OmegaParams& params, bool reduced = true);

OmegaReport omega(int which, const OmegaParams& params);

double omega_lower_bound(int which, const OmegaParams& params);

/// k×k upper bidiagonal matrix of ones.
Matrix bidiagonal_M(Index k);
/// k×(k+1) matrix with [1 1] on every row.
Matrix bidiagonal_N(Index k);

struct BidiagonalBlock {
    char kind = 'M';
    Index size = 0;
    Index rows() const { return size; }
    Index cols() const { return kind == 'M' ? size : size + 1; }
};

struct BidiagonalDecomposition {
    Permutation perm_rows;
    Permutation perm_cols;
    std::vector<BidiagonalBlock> blocks;
    /// omega_matrix(4, k) with rows and columns reordered.
    Matrix permuted;
    Matrix direct_sum;
    double singular_value_gap = 0.0;
};

/// Reorders the fourth coefficient matrix into M₁⊕M₁⊕M₃⊕M₃⊕…⊕M_{2k−1}⊕M_{2k−1}⊕N_{2k}
/// by walking the paths of its bipartite row/column graph. Throws
/// ConsistencyError if the result is not that direct sum.
BidiagonalDecomposition bidiagonal_decomposition(Index k);

} // namespace ratpencil
