#pragma once

#include "ratpencil/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ratpencil {

/// Eigenvalues of p0 + λp1 as pairs (α, β) with λ = α/β.
struct GeneralizedEigenvalues {
    std::vector<std::pair<Complex, Complex>> pairs;
    std::vector<bool> is_finite;
    /// Unit right eigenvectors as columns; only filled on request.
    Matrix right_vectors;
    /// |β| above this marks a finite eigenvalue.
    double threshold = 0.0;
    std::vector<std::string> warnings;

    std::vector<Complex> finite() const;
    Index infinite_count() const;
    bool regular() const { return warnings.empty(); }
};

/// Generalized eigenvalues of the pencil through LAPACK's QZ (zggev). A pair
/// with both |α| and |β| below the threshold raises a regularity warning.
GeneralizedEigenvalues qz(const Pencil& p, bool want_vectors = false);

/// Finite zeros of R via its block Kronecker linearization, or the linear
/// system matrix when ε = η = 0 and degree(D) ≤ 1.
GeneralizedEigenvalues zeros(const RationalQuadruple& q, Index eps, Index eta);

/// Eigenvalues of A. Appends a warning when the realization is not minimal.
std::vector<Complex> poles(const RationalQuadruple& q, std::vector<std::string>* warnings = nullptr);

/// Largest relative distance |a−b|/max(|a|,|b|,floor) over a greedy closest-pair
/// matching of two multisets; infinity if the sizes differ.
double match_eigenvalues(const std::vector<Complex>& a, const std::vector<Complex>& b, double floor = 0.0);

} // namespace ratpencil
