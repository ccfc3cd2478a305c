#include "ratpencil/pencil_core.hpp"

#include "ratpencil/linalg.hpp"

#include <cmath>

namespace ratpencil {

StructuralBlocks structural_blocks(Index k, Index r) {
    if (k < 1 || r < 1) throw ArgumentError("structural blocks need k >= 1 and r >= 1");
    StructuralBlocks b;
    b.E = Matrix::Zero(k, k + 1);
    b.F = Matrix::Zero(k, k + 1);
    b.E.leftCols(k).setIdentity();
    b.F.rightCols(k).setIdentity();
    b.L = Pencil::a_minus_lambda_b(b.E, b.F);
    b.Lkron = kron(b.L, identity(r));
    return b;
}

Vector lambda_vector(Index k, Complex lambda) {
    if (k < 0) throw ArgumentError("negative degree in lambda_vector");
    Vector v(k + 1);
    v(k) = 1.0;
    for (Index i = k - 1; i >= 0; --i) v(i) = v(i + 1) * lambda;
    return v;
}

Matrix eval(const Pencil& p, Complex lambda) { return p.p0 + lambda * p.p1; }

Matrix eval(const PolyMatrix& p, Complex lambda) {
    Matrix acc = p.coeffs.back();
    for (int i = p.degree() - 1; i >= 0; --i) acc = lambda * acc + p.coeffs[static_cast<std::size_t>(i)];
    return acc;
}

Matrix eval(const RationalQuadruple& q, Complex lambda) {
    Matrix shifted = lambda * identity(q.ell()) - q.A;
    return q.C * shifted.partialPivLu().solve(q.B) + eval(q.D, lambda);
}

double norm(const Matrix& a, NormKind kind) {
    return kind == NormKind::frobenius ? a.norm() : spectral_norm(a);
}

double norm(const Pencil& p, NormKind kind) {
    const double a = norm(p.p0, kind);
    const double b = norm(p.p1, kind);
    return std::sqrt(a * a + b * b);
}

double norm(const PolyMatrix& p, NormKind kind) {
    if (kind != NormKind::frobenius) throw ArgumentError("spectral norm is not defined for polynomial matrices");
    double s = 0.0;
    for (const Matrix& c : p.coeffs) s += c.squaredNorm();
    return std::sqrt(s);
}

double norm(const std::vector<PolyMatrix>& list, NormKind kind) {
    double s = 0.0;
    for (const PolyMatrix& p : list) {
        const double v = norm(p, kind);
        s += v * v;
    }
    return std::sqrt(s);
}

double norm(const RationalQuadruple& q, NormKind kind) {
    if (kind != NormKind::frobenius) throw ArgumentError("spectral norm is not defined for quadruples");
    const double v = norm_without_identity(q);
    return std::sqrt(static_cast<double>(q.ell()) + v * v);
}

double norm_without_identity(const RationalQuadruple& q) {
    const double d = norm(q.D);
    return std::sqrt(q.A.squaredNorm() + q.B.squaredNorm() + q.C.squaredNorm() + d * d);
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    if (out.size() == 0) return out;
    for (Index j = 0; j < a.cols(); ++j) {
        for (Index i = 0; i < a.rows(); ++i) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Pencil kron(const Pencil& a, const Matrix& b) { return Pencil(kron(a.p0, b), kron(a.p1, b)); }

Pencil kron(const Matrix& a, const Pencil& b) { return Pencil(kron(a, b.p0), kron(a, b.p1)); }

Vector vec(const Matrix& a) { return a.reshaped(); }

Matrix unvec(const Vector& v, Index rows, Index cols) {
    if (v.size() != rows * cols) throw StructuralError("unvec size mismatch");
    return v.reshaped(rows, cols);
}

Permutation perfect_shuffle(Index p, Index q) {
    Permutation perm(static_cast<std::size_t>(p * q));
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < q; ++j) perm[static_cast<std::size_t>(j + i * q)] = i + j * p;
    }
    return perm;
}

Vector permute(const Permutation& perm, const Vector& v) {
    Vector out(static_cast<Index>(perm.size()));
    for (std::size_t j = 0; j < perm.size(); ++j) out(static_cast<Index>(j)) = v(perm[j]);
    return out;
}

Matrix permutation_matrix(const Permutation& perm) {
    const Index n = static_cast<Index>(perm.size());
    Matrix out = Matrix::Zero(n, n);
    for (Index j = 0; j < n; ++j) out(j, perm[static_cast<std::size_t>(j)]) = 1.0;
    return out;
}

Matrix identity(Index n) { return Matrix::Identity(n, n); }

} // namespace ratpencil
