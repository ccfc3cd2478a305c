#pragma once

#include "ratpencil/types.hpp"

namespace ratpencil {

/// Thin SVD, singular values in decreasing order.
struct Svd {
    Matrix U;
    RealVector s;
    Matrix V;
};

Svd svd(const Matrix& a);
/// Full SVD: U is rows×rows, V is cols×cols.
Svd svd_full(const Matrix& a);
RealVector singular_values(const Matrix& a);

double spectral_norm(const Matrix& a);
/// Smallest of the min(rows, cols) singular values; 0 for empty matrices.
double sigma_min(const Matrix& a);
/// Numerical rank with tolerance max(rows, cols)·ε_M·σ_max unless tol > 0.
Index numerical_rank(const Matrix& a, double tol = -1.0);

/// Moore–Penrose pseudoinverse held in factored form so several right-hand
/// sides can be applied cheaply. Singular values below
/// max(rows, cols)·ε_M·σ_max are dropped.
class PseudoInverse {
  public:
    explicit PseudoInverse(const Matrix& a);

    Matrix apply(const Matrix& rhs) const;
    Index rank() const { return rank_; }
    /// σ_min(a) over min(rows, cols), including dropped values.
    double sigma_min() const;
    double sigma_max() const;
    const RealVector& singular_values() const { return svd_.s; }

  private:
    Svd svd_;
    Index rank_ = 0;
};

} // namespace ratpencil
