#include "ratpencil/linalg.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <string>

namespace ratpencil {

namespace {

Svd run_gesdd(const Matrix& a, char jobz) {
    const Index r = a.rows();
    const Index c = a.cols();
    const Index k = std::min(r, c);
    Svd out;
    if (k == 0) {
        out.s.resize(0);
        const Index ur = jobz == 'A' ? r : k;
        const Index vc = jobz == 'A' ? c : k;
        out.U = Matrix::Identity(r, ur);
        out.V = Matrix::Identity(c, vc);
        return out;
    }
    Matrix work = a;
    out.s.resize(k);
    const Index ucols = jobz == 'A' ? r : (jobz == 'N' ? 1 : k);
    const Index vtrows = jobz == 'A' ? c : (jobz == 'N' ? 1 : k);
    Matrix u(jobz == 'N' ? 1 : r, ucols);
    Matrix vt(vtrows, jobz == 'N' ? 1 : c);
    lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, jobz, static_cast<lapack_int>(r),
                                     static_cast<lapack_int>(c), work.data(),
                                     static_cast<lapack_int>(r), out.s.data(), u.data(),
                                     static_cast<lapack_int>(u.rows()), vt.data(),
                                     static_cast<lapack_int>(vt.rows()));
    if (info > 0) {
        // divide and conquer occasionally fails to converge; QR iteration does not
        work = a;
        RealVector superb(k);
        const char job = jobz == 'N' ? 'N' : jobz;
        info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, job, job, static_cast<lapack_int>(r),
                              static_cast<lapack_int>(c), work.data(), static_cast<lapack_int>(r),
                              out.s.data(), u.data(), static_cast<lapack_int>(u.rows()), vt.data(),
                              static_cast<lapack_int>(vt.rows()), superb.data());
    }
    if (info != 0) {
        throw ConsistencyError("SVD failed, LAPACK info = " + std::to_string(info));
    }
    if (jobz != 'N') {
        out.U = std::move(u);
        out.V = vt.adjoint();
    }
    return out;
}

} // namespace

Svd svd(const Matrix& a) { return run_gesdd(a, 'S'); }

Svd svd_full(const Matrix& a) { return run_gesdd(a, 'A'); }

RealVector singular_values(const Matrix& a) { return run_gesdd(a, 'N').s; }

double spectral_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    return singular_values(a)(0);
}

double sigma_min(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    RealVector s = singular_values(a);
    return s(s.size() - 1);
}

Index numerical_rank(const Matrix& a, double tol) {
    if (a.size() == 0) return 0;
    RealVector s = singular_values(a);
    if (tol <= 0.0) {
        tol = static_cast<double>(std::max(a.rows(), a.cols())) * kEpsM * s(0);
    }
    return static_cast<Index>((s.array() > tol).count());
}

PseudoInverse::PseudoInverse(const Matrix& a) : svd_(svd(a)) {
    if (svd_.s.size() == 0) return;
    const double tol = static_cast<double>(std::max(a.rows(), a.cols())) * kEpsM * svd_.s(0);
    rank_ = static_cast<Index>((svd_.s.array() > tol).count());
}

Matrix PseudoInverse::apply(const Matrix& rhs) const {
    const Index k = rank_;
    Matrix coeff = svd_.U.leftCols(k).adjoint() * rhs;
    for (Index i = 0; i < k; ++i) coeff.row(i) /= svd_.s(i);
    return svd_.V.leftCols(k) * coeff;
}

double PseudoInverse::sigma_min() const {
    return svd_.s.size() == 0 ? 0.0 : svd_.s(svd_.s.size() - 1);
}

double PseudoInverse::sigma_max() const { return svd_.s.size() == 0 ? 0.0 : svd_.s(0); }

} // namespace ratpencil
