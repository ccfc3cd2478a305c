#include "ratpencil/linearization.hpp"

#include "ratpencil/linalg.hpp"
#include "ratpencil/pencil_core.hpp"

#include <algorithm>
#include <cmath>

namespace ratpencil {

namespace {

void check_index(int i) {
    if (i < 1 || i > 3) throw ArgumentError("block index must be 1, 2 or 3");
}

Index weight(Index i, Index j, Index eps, Index eta) { return (eta + 1 - i) + (eps + 1 - j); }

bool is_zero(const Matrix& a) { return a.size() == 0 || (a.array() == Complex(0.0)).all(); }

bool equals(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || (a.array() == b.array()).all());
}

} // namespace

Index BlockLayout::row_size(int i) const {
    check_index(i);
    if (i == 1) return (eta + 1) * m;
    if (i == 2) return ell;
    return eps * n;
}

Index BlockLayout::col_size(int j) const {
    check_index(j);
    if (j == 1) return (eps + 1) * n;
    if (j == 2) return ell;
    return eta * m;
}

Index BlockLayout::row_offset(int i) const {
    check_index(i);
    Index off = 0;
    for (int k = 1; k < i; ++k) off += row_size(k);
    return off;
}

Index BlockLayout::col_offset(int j) const {
    check_index(j);
    Index off = 0;
    for (int k = 1; k < j; ++k) off += col_size(k);
    return off;
}

Pencil BlockKroneckerPencil::block(int i, int j) const {
    return S.block(layout.row_offset(i), layout.col_offset(j), layout.row_size(i), layout.col_size(j));
}

void BlockKroneckerPencil::set_block(int i, int j, const Pencil& b) {
    if (b.rows() != layout.row_size(i) || b.cols() != layout.col_size(j)) {
        throw StructuralError("block does not fit the grid position");
    }
    S.set_block(layout.row_offset(i), layout.col_offset(j), b);
}

Pencil build_M(const PolyMatrix& D, Index eps, Index eta) {
    if (eps < 0 || eta < 0) throw ArgumentError("negative Kronecker index");
    const Index d = eps + eta + 1;
    if (D.degree() != d) {
        throw StructuralError("degree of D is " + std::to_string(D.degree()) + " but eps+eta+1 = " +
                              std::to_string(d));
    }
    const Index m = D.rows();
    const Index n = D.cols();
    Pencil M = Pencil::zero((eta + 1) * m, (eps + 1) * n);
    Index i = 1;
    Index j = 1;
    for (Index e = d - 1; e >= 0; e -= 2) {
        M.p0.block((i - 1) * m, (j - 1) * n, m, n) = D.coeffs[static_cast<std::size_t>(e)];
        M.p1.block((i - 1) * m, (j - 1) * n, m, n) = D.coeffs[static_cast<std::size_t>(e + 1)];
        if (i < eta + 1 && j < eps + 1) {
            ++i;
            ++j;
        } else if (i == eta + 1) {
            j += 2;
        } else {
            i += 2;
        }
    }
    if (d % 2 == 0) M.p0.block(eta * m, eps * n, m, n) = D.coeffs[0];
    return M;
}

PolyMatrix recover_D(const Pencil& M, Index eps, Index eta, Index m, Index n) {
    if (M.rows() != (eta + 1) * m || M.cols() != (eps + 1) * n) {
        throw StructuralError("M does not match the (eta+1)m x (eps+1)n grid");
    }
    const int d = static_cast<int>(eps + eta + 1);
    PolyMatrix D = PolyMatrix::zero(m, n, d);
    for (Index i = 1; i <= eta + 1; ++i) {
        for (Index j = 1; j <= eps + 1; ++j) {
            const auto e = static_cast<std::size_t>(weight(i, j, eps, eta));
            D.coeffs[e] += M.p0.block((i - 1) * m, (j - 1) * n, m, n);
            D.coeffs[e + 1] += M.p1.block((i - 1) * m, (j - 1) * n, m, n);
        }
    }
    return D;
}

double recover_D_factor(Index eps, Index eta) {
    return std::sqrt(2.0 * static_cast<double>(std::min(eps + 1, eta + 1)));
}

BlockKroneckerPencil build_S(const RationalQuadruple& q, Index eps, Index eta) {
    q.validate();
    if (eps < 0 || eta < 0) throw ArgumentError("negative Kronecker index");
    if (q.degree() != eps + eta + 1) {
        throw StructuralError("degree of D is " + std::to_string(q.degree()) + " but eps+eta+1 = " +
                              std::to_string(eps + eta + 1));
    }
    BlockKroneckerPencil s;
    s.layout = BlockLayout{q.m(), q.n(), q.ell(), eps, eta};
    const BlockLayout& L = s.layout;
    s.S = Pencil::zero(L.rows(), L.cols());

    s.set_block(1, 1, build_M(q.D, eps, eta));

    Pencil c_block = Pencil::zero(L.row_size(1), L.ell);
    c_block.p0.bottomRows(L.m) = q.C;
    s.set_block(1, 2, c_block);

    Pencil b_block = Pencil::zero(L.ell, L.col_size(1));
    b_block.p0.rightCols(L.n) = q.B;
    s.set_block(2, 1, b_block);

    s.set_block(2, 2, Pencil::a_minus_lambda_b(q.A, identity(L.ell)));

    if (eta > 0) s.set_block(1, 3, structural_blocks(eta, L.m).Lkron.transpose());
    if (eps > 0) s.set_block(3, 1, structural_blocks(eps, L.n).Lkron);
    return s;
}

PolyMatrix build_P(const RationalQuadruple& q) {
    q.validate();
    const Index ell = q.ell();
    const Index m = q.m();
    const Index n = q.n();
    const int d = std::max(1, q.degree());
    PolyMatrix P = PolyMatrix::zero(ell + m, ell + n, d);
    P.coeffs[0].topLeftCorner(ell, ell) = -q.A;
    P.coeffs[0].topRightCorner(ell, n) = -q.B;
    P.coeffs[0].bottomLeftCorner(m, ell) = q.C;
    P.coeffs[1].topLeftCorner(ell, ell).setIdentity();
    for (int k = 0; k <= q.degree(); ++k) {
        P.coeffs[static_cast<std::size_t>(k)].bottomRightCorner(m, n) = q.D.coeffs[static_cast<std::size_t>(k)];
    }
    return P;
}

BlockKroneckerPencil build_linear_S(const RationalQuadruple& q) {
    q.validate();
    if (q.degree() > 1) throw StructuralError("linear system matrix needs degree(D) <= 1");
    RationalQuadruple lifted = q;
    if (q.degree() == 0) lifted.D.coeffs.push_back(Matrix::Zero(q.m(), q.n()));
    return build_S(lifted, 0, 0);
}

RationalQuadruple extract_quadruple(const BlockKroneckerPencil& s) {
    const BlockLayout& L = s.layout;
    RationalQuadruple q;
    q.A = s.block(2, 2).p0;
    q.B = s.block(2, 1).p0.rightCols(L.n);
    q.C = s.block(1, 2).p0.bottomRows(L.m);
    q.D = recover_D(s.block(1, 1), L.eps, L.eta, L.m, L.n);
    q.validate();
    return q;
}

std::vector<std::string> structure_violations(const BlockKroneckerPencil& s) {
    const BlockLayout& L = s.layout;
    std::vector<std::string> out;
    if (s.S.rows() != L.rows() || s.S.cols() != L.cols()) {
        out.emplace_back("pencil size does not match the layout");
        return out;
    }
    for (auto [i, j] : {std::pair{2, 3}, std::pair{3, 2}, std::pair{3, 3}}) {
        const Pencil b = s.block(i, j);
        if (!is_zero(b.p0) || !is_zero(b.p1)) {
            out.push_back("block (" + std::to_string(i) + "," + std::to_string(j) + ") is not zero");
        }
    }
    if (L.eta > 0) {
        const Pencil k2 = structural_blocks(L.eta, L.m).Lkron.transpose();
        const Pencil b = s.block(1, 3);
        if (!equals(b.p0, k2.p0) || !equals(b.p1, k2.p1)) out.emplace_back("block (1,3) is not L_eta^T x I_m");
    }
    if (L.eps > 0) {
        const Pencil k1 = structural_blocks(L.eps, L.n).Lkron;
        const Pencil b = s.block(3, 1);
        if (!equals(b.p0, k1.p0) || !equals(b.p1, k1.p1)) out.emplace_back("block (3,1) is not L_eps x I_n");
    }
    if (!equals(s.block(2, 2).p1, -identity(L.ell))) out.emplace_back("block (2,2) is not of the form A - lambda I");
    const Pencil b21 = s.block(2, 1);
    if (!is_zero(b21.p1) || !is_zero(b21.p0.leftCols(L.col_size(1) - L.n))) {
        out.emplace_back("block (2,1) is not B times the last unit block");
    }
    const Pencil b12 = s.block(1, 2);
    if (!is_zero(b12.p1) || !is_zero(b12.p0.topRows(L.row_size(1) - L.m))) {
        out.emplace_back("block (1,2) is not the last unit block times C");
    }
    return out;
}

Minimality minimality_check(const Matrix& A, const Matrix& B, const Matrix& C) {
    const Index ell = A.rows();
    if (A.cols() != ell || B.rows() != ell || C.cols() != ell) throw StructuralError("minimality check shape mismatch");
    auto full_rank = [ell](const Matrix& k) {
        if (k.size() == 0) return ell == 0;
        const RealVector s = singular_values(k);
        const double tol = static_cast<double>(ell) * kEpsM * s(0);
        return (s.array() > tol).count() == ell;
    };
    Matrix ctrb(ell, ell * B.cols());
    Matrix power = B;
    for (Index k = 0; k < ell; ++k) {
        ctrb.middleCols(k * B.cols(), B.cols()) = power;
        power = A * power;
    }
    Matrix obsv(ell * C.rows(), ell);
    power = C;
    for (Index k = 0; k < ell; ++k) {
        obsv.middleRows(k * C.rows(), C.rows()) = power;
        power = power * A;
    }
    Minimality out;
    out.controllable = full_rank(ctrb);
    out.observable = full_rank(obsv);
    out.minimal = out.controllable && out.observable;
    return out;
}

} // namespace ratpencil
