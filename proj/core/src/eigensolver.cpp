#include "ratpencil/eigensolver.hpp"

#include "ratpencil/linalg.hpp"
#include "ratpencil/linearization.hpp"
#include "ratpencil/pencil_core.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace ratpencil {

std::vector<Complex> GeneralizedEigenvalues::finite() const {
    std::vector<Complex> out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (is_finite[i]) out.push_back(pairs[i].first / pairs[i].second);
    }
    return out;
}

Index GeneralizedEigenvalues::infinite_count() const {
    return static_cast<Index>(std::count(is_finite.begin(), is_finite.end(), false));
}

GeneralizedEigenvalues qz(const Pencil& p, bool want_vectors) {
    if (p.rows() != p.cols()) throw StructuralError("QZ needs a square pencil");
    const Index n = p.rows();
    GeneralizedEigenvalues out;
    if (n == 0) return out;
    Matrix a = p.p0;
    Matrix b = -p.p1;
    Vector alpha(n);
    Vector beta(n);
    Matrix vl(1, 1);
    Matrix vr(want_vectors ? n : 1, want_vectors ? n : 1);
    const lapack_int info =
        LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', static_cast<lapack_int>(n), a.data(),
                      static_cast<lapack_int>(n), b.data(), static_cast<lapack_int>(n), alpha.data(), beta.data(),
                      vl.data(), 1, vr.data(), static_cast<lapack_int>(vr.rows()));
    if (info < 0) throw ConsistencyError("zggev rejected argument " + std::to_string(-info));
    if (info > 0) out.warnings.push_back("QZ iteration failed, info = " + std::to_string(info));

    out.threshold = static_cast<double>(n) * kEpsM * norm(p, NormKind::spectral);
    Index tiny_pairs = 0;
    for (Index i = 0; i < n; ++i) {
        out.pairs.emplace_back(alpha(i), beta(i));
        out.is_finite.push_back(std::abs(beta(i)) > out.threshold);
        if (std::abs(alpha(i)) <= out.threshold && std::abs(beta(i)) <= out.threshold) ++tiny_pairs;
    }
    if (tiny_pairs > 0) {
        out.warnings.push_back("pencil looks singular: " + std::to_string(tiny_pairs) +
                               " eigenvalue pair(s) with alpha and beta both negligible");
    }
    if (want_vectors) {
        out.right_vectors = vr;
        for (Index j = 0; j < n; ++j) {
            const double nv = out.right_vectors.col(j).norm();
            if (nv > 0.0) out.right_vectors.col(j) /= nv;
        }
    }
    return out;
}

GeneralizedEigenvalues zeros(const RationalQuadruple& q, Index eps, Index eta) {
    if (q.m() != q.n()) throw StructuralError("zeros are computed for square rational matrices only");
    if (eps == 0 && eta == 0 && q.degree() <= 1) return qz(build_linear_S(q).S);
    return qz(build_S(q, eps, eta).S);
}

std::vector<Complex> poles(const RationalQuadruple& q, std::vector<std::string>* warnings) {
    q.validate();
    if (warnings != nullptr && !minimality_check(q.A, q.B, q.C).minimal) {
        warnings->push_back("realization is not minimal; some eigenvalues of A may not be poles");
    }
    const GeneralizedEigenvalues ev = qz(Pencil::a_minus_lambda_b(q.A, identity(q.ell())));
    return ev.finite();
}

double match_eigenvalues(const std::vector<Complex>& a, const std::vector<Complex>& b, double floor) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    const std::size_t n = a.size();
    auto rel = [floor](Complex x, Complex y) {
        const double scale = std::max({std::abs(x), std::abs(y), floor});
        return scale == 0.0 ? 0.0 : std::abs(x - y) / scale;
    };
    std::vector<bool> used_a(n, false);
    std::vector<bool> used_b(n, false);
    double worst = 0.0;
    for (std::size_t step = 0; step < n; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0;
        std::size_t bj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (used_a[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (used_b[j]) continue;
                const double d = rel(a[i], b[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        used_a[bi] = true;
        used_b[bj] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace ratpencil
