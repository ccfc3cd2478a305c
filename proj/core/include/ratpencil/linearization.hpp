#pragma once

#include "ratpencil/types.hpp"

#include <string>
#include <vector>

namespace ratpencil {

/// Offsets of the 3×3 block grid of a block Kronecker pencil. Row blocks have
/// sizes (η+1)m, ℓ, εn and column blocks (ε+1)n, ℓ, ηm. Blocks are numbered
/// from 1 to match the usual matrix notation.
struct BlockLayout {
    Index m = 0;
    Index n = 0;
    Index ell = 0;
    Index eps = 0;
    Index eta = 0;

    Index row_size(int i) const;
    Index col_size(int j) const;
    Index row_offset(int i) const;
    Index col_offset(int j) const;
    Index rows() const { return row_offset(3) + row_size(3); }
    Index cols() const { return col_offset(3) + col_size(3); }
    int degree() const { return static_cast<int>(eps + eta + 1); }
};

struct BlockKroneckerPencil {
    Pencil S;
    BlockLayout layout;

    Pencil block(int i, int j) const;
    void set_block(int i, int j, const Pencil& b);
};

/// Staircase placement of D's coefficients on the (η+1)×(ε+1) grid of m×n
/// blocks, each coefficient used once, so ‖M‖_F = ‖D‖_F and
/// (Λ_η⊗I_m)ᵀ M(λ) (Λ_ε⊗I_n) = D(λ).
Pencil build_M(const PolyMatrix& D, Index eps, Index eta);

/// D_k collects the constant parts of blocks of weight k and the linear parts
/// of blocks of weight k−1, where block (i,j) has weight (η+1−i)+(ε+1−j).
PolyMatrix recover_D(const Pencil& M, Index eps, Index eta, Index m, Index n);

/// √(2·min(ε+1, η+1)), the factor in ‖recover_D(M)‖_F ≤ factor·‖M‖_F.
double recover_D_factor(Index eps, Index eta);

BlockKroneckerPencil build_S(const RationalQuadruple& q, Index eps, Index eta);

/// [[λI−A, −B],[C, D(λ)]] as a polynomial matrix of degree max(1, d).
PolyMatrix build_P(const RationalQuadruple& q);

/// [[D₀+λD₁, C],[B, A−λI]] for degree(D) ≤ 1, laid out as a block
/// Kronecker pencil with ε = η = 0.
BlockKroneckerPencil build_linear_S(const RationalQuadruple& q);

/// Reads A, B, C from the fixed positions and D via recover_D.
RationalQuadruple extract_quadruple(const BlockKroneckerPencil& s);

/// Human-readable list of violated structural invariants; empty when the
/// pencil has exactly the block Kronecker shape.
std::vector<std::string> structure_violations(const BlockKroneckerPencil& s);

struct Minimality {
    bool controllable = false;
    bool observable = false;
    bool minimal = false;
};

Minimality minimality_check(const Matrix& A, const Matrix& B, const Matrix& C);

} // namespace ratpencil
