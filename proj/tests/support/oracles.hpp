#pragma once

// Reference computations that avoid the library: Eigen's one-sided Jacobi SVD, real QZ
// and complete orthogonal decomposition, explicit loops for Kronecker
// products, and closed forms.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using Cx = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using MatR = Eigen::MatrixXd;
using VecC = Eigen::VectorXcd;

template <class M>
M kron(const M& a, const M& b) {
    M out = M::Zero(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            for (Eigen::Index k = 0; k < b.rows(); ++k) {
                for (Eigen::Index l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return out;
}

inline Eigen::VectorXd singular_values(const MatC& a) {
    if (a.size() == 0) return {};
    Eigen::JacobiSVD<MatC> svd(a);
    return svd.singularValues();
}

inline double sigma_min(const MatC& a) {
    const Eigen::VectorXd s = singular_values(a);
    return s.size() == 0 ? 0.0 : s(s.size() - 1);
}

inline double spectral_norm(const MatC& a) {
    const Eigen::VectorXd s = singular_values(a);
    return s.size() == 0 ? 0.0 : s(0);
}

inline MatR shift_E(int k) {
    MatR e = MatR::Zero(k, k + 1);
    for (int i = 0; i < k; ++i) e(i, i) = 1.0;
    return e;
}

inline MatR shift_F(int k) {
    MatR f = MatR::Zero(k, k + 1);
    for (int i = 0; i < k; ++i) f(i, i + 1) = 1.0;
    return f;
}

inline double omega3_closed_form(int eps, int eta) {
    const double pi = std::numbers::pi;
    if (eps == eta) return 2.0 * std::sin(pi / (4.0 * eta));
    return 2.0 * std::sin(pi / (4.0 * std::min(eps, eta) + 2.0));
}

inline double omega4_closed_form(int k) { return 2.0 * std::sin(std::numbers::pi / (8.0 * k - 2.0)); }
inline double bidiag_square_closed_form(int k) { return 2.0 * std::sin(std::numbers::pi / (4.0 * k + 2.0)); }
inline double bidiag_wide_closed_form(int k) { return 2.0 * std::sin(std::numbers::pi / (2.0 * k + 2.0)); }

/// Finite eigenvalues of Σ coeffs[k] λᵏ through the first companion pencil,
/// solved by Eigen's real QZ. Infinite ones are discarded by taking the
/// `count` eigenvalues of smallest modulus.
inline std::vector<Cx> companion_zeros(const std::vector<MatR>& coeffs, std::size_t count, double* separation = nullptr) {
    const int d = static_cast<int>(coeffs.size()) - 1;
    const Eigen::Index N = coeffs.front().rows();
    const Eigen::Index size = d * N;
    MatR A0 = MatR::Zero(size, size);
    MatR A1 = MatR::Zero(size, size);
    A1.topLeftCorner(N, N) = coeffs[static_cast<std::size_t>(d)];
    for (int k = 1; k < d; ++k) A1.block(k * N, k * N, N, N) = MatR::Identity(N, N);
    for (int k = 0; k < d; ++k) A0.block(0, k * N, N, N) = coeffs[static_cast<std::size_t>(d - 1 - k)];
    for (int k = 1; k < d; ++k) A0.block(k * N, (k - 1) * N, N, N) = -MatR::Identity(N, N);
    // (A0 + λA1)v = 0  ⇔  (−A0)v = λ·A1·v
    Eigen::GeneralizedEigenSolver<MatR> ges(-A0, A1, false);
    const auto alphas = ges.alphas();
    const auto betas = ges.betas();
    std::vector<Cx> vals;
    for (Eigen::Index i = 0; i < alphas.size(); ++i) {
        if (betas(i) == 0.0) {
            vals.emplace_back(std::numeric_limits<double>::infinity(), 0.0);
        } else {
            vals.push_back(alphas(i) / betas(i));
        }
    }
    std::sort(vals.begin(), vals.end(), [](Cx a, Cx b) { return std::abs(a) < std::abs(b); });
    if (separation) {
        *separation = vals.size() > count && count > 0 ? std::abs(vals[count]) / std::abs(vals[count - 1])
                                                       : std::numeric_limits<double>::infinity();
    }
    vals.resize(std::min(count, vals.size()));
    return vals;
}

/// Largest relative distance after matching each element of a to its nearest
/// unused element of b, smallest distances first.
inline double multiset_distance(std::vector<Cx> a, std::vector<Cx> b, double floor = 0.0) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::vector<bool> used_a(a.size()), used_b(b.size());
    double worst = 0.0;
    for (std::size_t round = 0; round < a.size(); ++round) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (used_a[i]) continue;
            for (std::size_t j = 0; j < b.size(); ++j) {
                if (used_b[j]) continue;
                const double dist = std::abs(a[i] - b[j]) / std::max({std::abs(a[i]), std::abs(b[j]), floor});
                if (dist < best) {
                    best = dist;
                    bi = i;
                    bj = j;
                }
            }
        }
        used_a[bi] = used_b[bj] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

/// C(λI − A)⁻¹B + Σ Dₖλᵏ by a direct LU solve.
inline MatC transfer(const MatC& A, const MatC& B, const MatC& C, const std::vector<MatC>& D, Cx lambda) {
    const Eigen::Index ell = A.rows();
    MatC shifted = lambda * MatC::Identity(ell, ell) - A;
    MatC out = C * shifted.fullPivLu().solve(B);
    Cx p(1.0, 0.0);
    for (const MatC& dk : D) {
        out += p * dk;
        p *= lambda;
    }
    return out;
}

/// Minimum-norm (ΔA, ΔB, ΔC, ΔD₀…ΔD_d) with
/// [[−ΔA, −ΔB],[ΔC, Σ ΔDₖλᵏ]] = target, by a dense complete orthogonal
/// decomposition of the vectorized map. Returns the Frobenius norm of the
/// solution.
inline double min_norm_tuple(const MatC& target, Eigen::Index ell, Eigen::Index m, Eigen::Index n, int d, Cx lambda) {
    const Eigen::Index rows = (ell + m) * (ell + n);
    const Eigen::Index unknowns = ell * ell + ell * n + m * ell + (d + 1) * m * n;
    MatC L = MatC::Zero(rows, unknowns);
    auto row_of = [&](Eigen::Index i, Eigen::Index j) { return j * (ell + m) + i; };
    Eigen::Index col = 0;
    for (Eigen::Index j = 0; j < ell; ++j)
        for (Eigen::Index i = 0; i < ell; ++i) L(row_of(i, j), col++) = -1.0;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < ell; ++i) L(row_of(i, ell + j), col++) = -1.0;
    for (Eigen::Index j = 0; j < ell; ++j)
        for (Eigen::Index i = 0; i < m; ++i) L(row_of(ell + i, j), col++) = 1.0;
    Cx p(1.0, 0.0);
    for (int k = 0; k <= d; ++k) {
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < m; ++i) L(row_of(ell + i, ell + j), col++) = p;
        p *= lambda;
    }
    const VecC rhs = Eigen::Map<const VecC>(target.data(), target.size());
    Eigen::CompleteOrthogonalDecomposition<MatC> cod(L);
    const VecC z = cod.solve(rhs);
    return z.norm();
}

} // namespace oracle
