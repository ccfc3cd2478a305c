#pragma once

#include "ratpencil/linearization.hpp"
#include "ratpencil/types.hpp"

#include <utility>
#include <vector>

namespace ratpencil {

/// Â = d_λT⁻¹AT, B̂ = √(d_λd_R)T⁻¹B, Ĉ = √(d_λd_R)CT, D̂ᵢ = d_R·d_λ⁻ⁱDᵢ.
/// With pow2, d_λ and d_R are powers of two and every multiplier applied to
/// an entry of A, B, C or Dᵢ is a power of two; the entries of T are 2ᵏ or
/// √2·2ᵏ, all with the same choice.
struct ScalingResult {
    RealVector T_diag;
    double d_lambda = 1.0;
    double d_R = 1.0;
    bool pow2 = true;
};

/// Diagonal T equalizing row and column 2-norms of T⁻¹AT by sweeps over the
/// indices, then multiplied by a constant so that ‖T⁻¹B‖_F = ‖CT‖_F.
RealVector balance(const Matrix& A, const Matrix& B, const Matrix& C, bool pow2 = true);

std::pair<RationalQuadruple, ScalingResult> scale_quadruple(const RationalQuadruple& q, bool pow2 = true);

/// Applies the coefficient maps of a given scaling.
RationalQuadruple apply_scaling(const RationalQuadruple& q, const ScalingResult& sr);

/// Inverse of apply_scaling.
RationalQuadruple unscale_quadruple(const RationalQuadruple& q_hat, const ScalingResult& sr);

/// D_ℓ·S(λ̂/d_λ)·D_r.
BlockKroneckerPencil scale_pencil(const BlockKroneckerPencil& S, const ScalingResult& sr);

/// Diagonals of D_ℓ and D_r.
std::pair<RealVector, RealVector> pencil_scalings(const BlockLayout& layout, const ScalingResult& sr);

/// λ = λ̂/d_λ; infinities stay infinite.
std::vector<Complex> unscale_eigenvalues(const std::vector<Complex>& vals, const ScalingResult& sr);

bool is_power_of_two(double x);

} // namespace ratpencil
