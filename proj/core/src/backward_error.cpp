#include "ratpencil/backward_error.hpp"

#include "ratpencil/linalg.hpp"
#include "ratpencil/linearization.hpp"
#include "ratpencil/pencil_core.hpp"

#include <algorithm>
#include <cmath>

namespace ratpencil {

Matrix rank_one_singularizer(const Matrix& M) {
    if (M.rows() != M.cols()) throw StructuralError("rank_one_singularizer needs a square matrix");
    if (M.size() == 0) return M;
    const Svd f = svd(M);
    const Index k = f.s.size() - 1;
    return -f.s(k) * f.U.col(k) * f.V.col(k).adjoint();
}

LocalBackwardError local_r(const RationalQuadruple& q, Complex lambda) {
    q.validate();
    const Index ell = q.ell(), m = q.m(), n = q.n();
    const int d = q.degree();
    const Matrix P = eval(build_P(q), lambda);

    LocalBackwardError out;
    out.lambda = lambda;
    const Svd f = svd(P);
    out.sigma_min = f.s(f.s.size() - 1);
    const Matrix delta = rank_one_singularizer(P);
    out.delta11 = delta.topLeftCorner(ell, ell);
    out.delta12 = delta.topRightCorner(ell, n);
    out.delta21 = delta.bottomLeftCorner(m, ell);
    out.delta22 = delta.bottomRightCorner(m, n);

    const double a2 = std::norm(lambda);
    double g = 0.0;
    for (int k = 0; k <= d; ++k) g += std::pow(a2, k);
    out.g_value = g;

    std::vector<Matrix> dd;
    dd.reserve(static_cast<std::size_t>(d) + 1);
    Complex power(1.0, 0.0);
    for (int k = 0; k <= d; ++k) {
        dd.push_back(out.delta22 * (std::conj(power) / g));
        power *= lambda;
    }
    out.perturbation = RationalQuadruple(-out.delta11, -out.delta12, out.delta21, PolyMatrix(std::move(dd)));

    out.r_local = std::sqrt(out.delta11.squaredNorm() + out.delta12.squaredNorm() + out.delta21.squaredNorm() +
                            out.delta22.squaredNorm() / g);

    Matrix rebuilt(ell + m, ell + n);
    rebuilt << -out.perturbation.A, -out.perturbation.B, out.perturbation.C, eval(out.perturbation.D, lambda);
    out.reconstruction_residual = (rebuilt - delta).norm();
    if (out.reconstruction_residual > 1e-12 * delta.norm()) {
        throw ConsistencyError("distributed perturbation does not reproduce the singularizing matrix");
    }
    return out;
}

GlobalBackwardError global_r(const RationalQuadruple& q, const std::vector<Complex>& eigenvalues) {
    GlobalBackwardError out;
    for (const Complex& lam : eigenvalues) {
        if (!std::isfinite(lam.real()) || !std::isfinite(lam.imag())) {
            ++out.skipped;
            continue;
        }
        out.per_eig.push_back(local_r(q, lam));
        out.r = std::max(out.r, out.per_eig.back().r_local);
    }
    if (out.per_eig.empty()) out.warnings.push_back("no finite eigenvalues; r set to 0");
    if (out.skipped > 0) out.warnings.push_back(std::to_string(out.skipped) + " infinite eigenvalues skipped");
    const double nq = norm(q);
    out.r_relative = nq > 0.0 ? out.r / nq : 0.0;
    return out;
}

} // namespace ratpencil
