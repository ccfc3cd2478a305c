#include "ratpencil/types.hpp"

#include <string>

namespace ratpencil {

namespace {

std::string dims(Index r, Index c) { return std::to_string(r) + "x" + std::to_string(c); }

} // namespace

Pencil::Pencil(Matrix a0, Matrix a1) : p0(std::move(a0)), p1(std::move(a1)) {
    if (p0.rows() != p1.rows() || p0.cols() != p1.cols()) {
        throw StructuralError("pencil coefficients differ in shape: " + dims(p0.rows(), p0.cols()) +
                              " vs " + dims(p1.rows(), p1.cols()));
    }
}

Pencil Pencil::zero(Index rows, Index cols) {
    return Pencil(Matrix::Zero(rows, cols), Matrix::Zero(rows, cols));
}

Pencil Pencil::a_minus_lambda_b(const Matrix& a, const Matrix& b) { return Pencil(a, -b); }

Pencil Pencil::constant(const Matrix& a) { return Pencil(a, Matrix::Zero(a.rows(), a.cols())); }

Pencil Pencil::block(Index r, Index c, Index nr, Index nc) const {
    return Pencil(p0.block(r, c, nr, nc), p1.block(r, c, nr, nc));
}

void Pencil::set_block(Index r, Index c, const Pencil& b) {
    p0.block(r, c, b.rows(), b.cols()) = b.p0;
    p1.block(r, c, b.rows(), b.cols()) = b.p1;
}

Pencil Pencil::transpose() const { return Pencil(p0.transpose(), p1.transpose()); }

Pencil& Pencil::operator+=(const Pencil& o) {
    if (rows() != o.rows() || cols() != o.cols()) throw StructuralError("pencil sum shape mismatch");
    p0 += o.p0;
    p1 += o.p1;
    return *this;
}

Pencil& Pencil::operator-=(const Pencil& o) {
    if (rows() != o.rows() || cols() != o.cols()) throw StructuralError("pencil difference shape mismatch");
    p0 -= o.p0;
    p1 -= o.p1;
    return *this;
}

Pencil operator+(Pencil a, const Pencil& b) { return a += b; }
Pencil operator-(Pencil a, const Pencil& b) { return a -= b; }
Pencil operator*(Complex s, const Pencil& p) { return Pencil(s * p.p0, s * p.p1); }

Pencil operator*(const Matrix& left, const Pencil& p) {
    if (left.cols() != p.rows()) throw StructuralError("matrix-pencil product shape mismatch");
    return Pencil(left * p.p0, left * p.p1);
}

Pencil operator*(const Pencil& p, const Matrix& right) {
    if (p.cols() != right.rows()) throw StructuralError("pencil-matrix product shape mismatch");
    return Pencil(p.p0 * right, p.p1 * right);
}

PolyMatrix::PolyMatrix(std::vector<Matrix> c) : coeffs(std::move(c)) {
    if (coeffs.empty()) throw StructuralError("polynomial matrix needs at least one coefficient");
    for (const Matrix& m : coeffs) {
        if (m.rows() != coeffs.front().rows() || m.cols() != coeffs.front().cols()) {
            throw StructuralError("polynomial matrix coefficients differ in shape");
        }
    }
}

PolyMatrix PolyMatrix::zero(Index rows, Index cols, int degree) {
    if (degree < 0) throw ArgumentError("negative degree");
    return PolyMatrix(std::vector<Matrix>(static_cast<std::size_t>(degree) + 1, Matrix::Zero(rows, cols)));
}

RationalQuadruple::RationalQuadruple(Matrix a, Matrix b, Matrix c, PolyMatrix d)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)) {
    validate();
}

void RationalQuadruple::validate() const {
    if (A.rows() == 0) throw StructuralError("quadruple needs a state dimension l > 0");
    if (A.rows() != A.cols()) throw StructuralError("A must be square, got " + dims(A.rows(), A.cols()));
    if (B.rows() != A.rows()) throw StructuralError("B must have l rows");
    if (C.cols() != A.rows()) throw StructuralError("C must have l columns");
    if (D.coeffs.empty()) throw StructuralError("D has no coefficients");
    if (D.rows() != C.rows() || D.cols() != B.cols()) {
        throw StructuralError("D must be " + dims(C.rows(), B.cols()) + ", got " + dims(D.rows(), D.cols()));
    }
}

} // namespace ratpencil
