#pragma once

#include "ratpencil/types.hpp"

#include <vector>

namespace ratpencil {

/// E_k = [I_k | 0], F_k = [0 | I_k], L_k(λ) = E_k − λF_k and L_k ⊗ I_r.
struct StructuralBlocks {
    Matrix E;
    Matrix F;
    Pencil L;
    Pencil Lkron;
};

StructuralBlocks structural_blocks(Index k, Index r);

/// [λᵏ, …, λ, 1]ᵀ.
Vector lambda_vector(Index k, Complex lambda);

Matrix eval(const Pencil& p, Complex lambda);
Matrix eval(const PolyMatrix& p, Complex lambda);
/// C(λI − A)⁻¹B + D(λ).
Matrix eval(const RationalQuadruple& q, Complex lambda);

enum class NormKind { frobenius, spectral };

double norm(const Matrix& a, NormKind kind = NormKind::frobenius);
double norm(const Pencil& p, NormKind kind = NormKind::frobenius);
double norm(const PolyMatrix& p, NormKind kind = NormKind::frobenius);
double norm(const std::vector<PolyMatrix>& list, NormKind kind = NormKind::frobenius);
/// √(ℓ + ‖A‖² + ‖B‖² + ‖C‖² + Σ‖Dᵢ‖²), the Frobenius norm of [[λI−A, −B],[C, D(λ)]].
double norm(const RationalQuadruple& q, NormKind kind = NormKind::frobenius);
/// Same without the ℓ summand.
double norm_without_identity(const RationalQuadruple& q);

Matrix kron(const Matrix& a, const Matrix& b);
Pencil kron(const Pencil& a, const Matrix& b);
Pencil kron(const Matrix& a, const Pencil& b);
/// Column stacking.
Vector vec(const Matrix& a);
Matrix unvec(const Vector& v, Index rows, Index cols);

/// perm[j] is the source index of entry j: applying it to vec(X) of a p×q
/// matrix yields vec(Xᵀ).
using Permutation = std::vector<Index>;

Permutation perfect_shuffle(Index p, Index q);
Vector permute(const Permutation& perm, const Vector& v);
/// Row j of the result is row perm[j] of the identity.
Matrix permutation_matrix(const Permutation& perm);

Matrix identity(Index n);

} // namespace ratpencil
