#pragma once

#include "ratpencil/types.hpp"

#include <string>
#include <vector>

namespace ratpencil {

/// Smallest Frobenius-norm Δ with M + Δ singular: −σ_min·u·v* from the last
/// singular triplet.
Matrix rank_one_singularizer(const Matrix& M);

struct LocalBackwardError {
    Complex lambda;
    /// Blocks of the singularizing perturbation of P(λ) = [[λI−A, −B],[C, D(λ)]].
    Matrix delta11;
    Matrix delta12;
    Matrix delta21;
    Matrix delta22;
    /// The distributed perturbation of the quadruple.
    RationalQuadruple perturbation;
    double r_local = 0.0;
    /// Σ_{k=0}^{d} |λ|^{2k}.
    double g_value = 0.0;
    double sigma_min = 0.0;
    /// ‖ΔP(λ) − Δ‖_F after reassembling the perturbation.
    double reconstruction_residual = 0.0;
};

LocalBackwardError local_r(const RationalQuadruple& q, Complex lambda);

struct GlobalBackwardError {
    double r = 0.0;
    double r_relative = 0.0;
    std::vector<LocalBackwardError> per_eig;
    Index skipped = 0;
    std::vector<std::string> warnings;
};

/// Maximum of local_r over the finite entries of eigenvalues.
GlobalBackwardError global_r(const RationalQuadruple& q, const std::vector<Complex>& eigenvalues);

} // namespace ratpencil
