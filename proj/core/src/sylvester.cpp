#include "ratpencil/sylvester.hpp"

#include "ratpencil/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ratpencil {

SylvesterSystem assemble(const Pencil& p1, const Pencil& p2, const Pencil& delta) {
    SylvesterShape sh{p1.rows(), p1.cols(), p2.rows(), p2.cols()};
    if (delta.rows() != sh.m2 || delta.cols() != sh.n1) {
        throw StructuralError("right-hand side must be " + std::to_string(sh.m2) + "x" + std::to_string(sh.n1));
    }
    const Index rows = sh.m2 * sh.n1;
    const Index xcols = sh.m2 * sh.m1;
    const Index ycols = sh.n2 * sh.n1;
    SylvesterSystem sys;
    sys.shape = sh;
    sys.coeff = Matrix::Zero(2 * rows, xcols + ycols);
    sys.coeff.block(0, 0, rows, xcols) = kron(p1.p0.transpose(), identity(sh.m2));
    sys.coeff.block(0, xcols, rows, ycols) = kron(identity(sh.n1), p2.p0);
    sys.coeff.block(rows, 0, rows, xcols) = kron(p1.p1.transpose(), identity(sh.m2));
    sys.coeff.block(rows, xcols, rows, ycols) = kron(identity(sh.n1), p2.p1);
    sys.rhs.resize(2 * rows);
    sys.rhs << vec(delta.p0), vec(delta.p1);
    return sys;
}

SylvesterSolution min_norm_solve(const SylvesterSystem& sys) {
    const SylvesterShape& sh = sys.shape;
    SylvesterSolution out;
    const PseudoInverse pinv(sys.coeff);
    const Vector x = pinv.apply(sys.rhs);
    out.X = unvec(x.head(sh.m2 * sh.m1), sh.m2, sh.m1);
    out.Y = unvec(x.tail(sh.n2 * sh.n1), sh.n2, sh.n1);
    out.residual = (sys.coeff * x - sys.rhs).norm();
    out.sigma_min = sys.coeff.rows() <= sys.coeff.cols() ? pinv.sigma_min() : 0.0;
    return out;
}

EquivalenceRestoration restore_equivalence(const Pencil& target, const Pencil& perturbed) {
    if (target.rows() != perturbed.rows() || target.cols() != perturbed.cols()) {
        throw StructuralError("equivalence restoration needs pencils of equal size");
    }
    const SylvesterSolution sol = min_norm_solve(assemble(target, perturbed, perturbed - target));
    if (sol.X.size() > 0 && spectral_norm(sol.X) >= 1.0) {
        throw DegeneracyError("I + X is not safely invertible (||X||_2 >= 1)");
    }
    EquivalenceRestoration out;
    out.X = sol.X;
    out.Y = sol.Y;
    out.residual = sol.residual;
    out.ok = sol.residual <= 1e2 * kEpsM * norm(perturbed);
    return out;
}

Pencil apply_equivalence(const Matrix& X, const Pencil& p, const Matrix& Y) {
    const Matrix left = identity(X.rows()) + X;
    const Matrix right = identity(Y.rows()) - Y;
    const auto lu = left.partialPivLu();
    return Pencil(lu.solve(p.p0 * right), lu.solve(p.p1 * right));
}

namespace {

struct Ef {
    Matrix E;
    Matrix F;
};

Ef ef(Index k) {
    const StructuralBlocks b = structural_blocks(k, 1);
    return {b.E, b.F};
}

Matrix stack_2x2(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
    Matrix out(a.rows() + c.rows(), a.cols() + b.cols());
    out << a, b, c, d;
    return out;
}

double power_term(double normA, Index p) { return std::max(1.0, std::pow(normA, static_cast<double>(p))); }

void require_positive(Index v, const char* what) {
    if (v < 1) throw ArgumentError(std::string(what) + " must be positive");
}

} // namespace

Matrix omega_matrix(int which, const OmegaParams& p, bool reduced) {
    switch (which) {
    case 1: {
        require_positive(p.eps, "eps");
        const Index ell = p.A.rows();
        if (ell < 1 || p.A.cols() != ell) throw ArgumentError("omega 1 needs a square A");
        const Ef e = ef(p.eps);
        const Index r = reduced ? 1 : p.n;
        const Matrix Ir = identity(r);
        return stack_2x2(kron(p.A.transpose(), identity(p.eps * r)), kron(identity(ell), kron(e.E, Ir)),
                         kron(identity(ell), identity(p.eps * r)), kron(identity(ell), kron(e.F, Ir)));
    }
    case 2: {
        require_positive(p.eta, "eta");
        const Index ell = p.A.rows();
        if (ell < 1 || p.A.cols() != ell) throw ArgumentError("omega 2 needs a square A");
        const Ef e = ef(p.eta);
        const Index r = reduced ? 1 : p.m;
        return stack_2x2(kron(e.E, identity(r * ell)), kron(identity(p.eta * r), p.A),
                         kron(e.F, identity(r * ell)), kron(identity(p.eta * r), identity(ell)));
    }
    case 3: {
        if (p.eps < 1 || p.eta < 1) throw ArgumentError("omega 3 is void when min(eps, eta) = 0");
        const Ef e1 = ef(p.eps);
        const Ef e2 = ef(p.eta);
        const Index rm = reduced ? 1 : p.m;
        const Index rn = reduced ? 1 : p.n;
        const Matrix In = identity(rn);
        return stack_2x2(kron(e2.E, identity(rm * p.eps * rn)), kron(identity(p.eta * rm), kron(e1.E, In)),
                         kron(e2.F, identity(rm * p.eps * rn)), kron(identity(p.eta * rm), kron(e1.F, In)));
    }
    case 4: {
        require_positive(p.k, "k");
        const Ef e = ef(p.k);
        const Index r = reduced ? 1 : p.r;
        const Matrix Ir = identity(r);
        const Matrix Ikr = identity(p.k * r);
        return stack_2x2(kron(kron(e.E.transpose(), Ir), Ikr), kron(identity((p.k + 1) * r), kron(e.E, Ir)),
                         kron(kron(e.F.transpose(), Ir), Ikr), kron(identity((p.k + 1) * r), kron(e.F, Ir)));
    }
    default:
        throw ArgumentError("omega index must be 1, 2, 3 or 4");
    }
}

double omega_lower_bound(int which, const OmegaParams& p) {
    switch (which) {
    case 1:
        return 1.0 / (1.0 + 2.0 * static_cast<double>(p.eps) * power_term(spectral_norm(p.A), p.eps));
    case 2:
        return 1.0 / (1.0 + 2.0 * static_cast<double>(p.eta) * power_term(spectral_norm(p.A), p.eta));
    case 3:
        return 2.0 * std::numbers::sqrt2 / static_cast<double>(p.eps + p.eta);
    case 4:
        return 3.0 / static_cast<double>(4 * p.k - 1);
    default:
        throw ArgumentError("omega index must be 1, 2, 3 or 4");
    }
}

OmegaReport omega(int which, const OmegaParams& params) {
    OmegaReport rep;
    rep.which = which;
    rep.params = params;
    rep.omega = sigma_min(omega_matrix(which, params));
    rep.lower_bound = omega_lower_bound(which, params);
    if (which <= 2) rep.normA = spectral_norm(params.A);
    const double pi = std::numbers::pi;
    if (which == 3) {
        const auto lo = static_cast<double>(std::min(params.eps, params.eta));
        rep.exact = params.eps == params.eta ? 2.0 * std::sin(pi / (4.0 * static_cast<double>(params.eta)))
                                             : 2.0 * std::sin(pi / (4.0 * lo + 2.0));
    } else if (which == 4) {
        rep.exact = 2.0 * std::sin(pi / (8.0 * static_cast<double>(params.k) - 2.0));
    }
    return rep;
}

Matrix bidiagonal_M(Index k) {
    Matrix out = Matrix::Identity(k, k);
    for (Index i = 0; i + 1 < k; ++i) out(i, i + 1) = 1.0;
    return out;
}

Matrix bidiagonal_N(Index k) {
    Matrix out = Matrix::Zero(k, k + 1);
    for (Index i = 0; i < k; ++i) {
        out(i, i) = 1.0;
        out(i, i + 1) = 1.0;
    }
    return out;
}

BidiagonalDecomposition bidiagonal_decomposition(Index k) {
    require_positive(k, "k");
    OmegaParams params;
    params.k = k;
    const Matrix W = omega_matrix(4, params);
    const Index nr = W.rows();
    const Index nc = W.cols();

    std::vector<std::vector<Index>> row_adj(static_cast<std::size_t>(nr));
    std::vector<std::vector<Index>> col_adj(static_cast<std::size_t>(nc));
    for (Index i = 0; i < nr; ++i) {
        for (Index j = 0; j < nc; ++j) {
            if (W(i, j) != Complex(0.0)) {
                if (W(i, j) != Complex(1.0)) throw ConsistencyError("coefficient matrix is not a 0/1 matrix");
                row_adj[static_cast<std::size_t>(i)].push_back(j);
                col_adj[static_cast<std::size_t>(j)].push_back(i);
            }
        }
    }

    struct Path {
        std::vector<Index> rows;
        std::vector<Index> cols;
    };
    std::vector<Path> paths;
    std::vector<bool> row_seen(static_cast<std::size_t>(nr), false);
    std::vector<bool> col_seen(static_cast<std::size_t>(nc), false);
    for (Index start = 0; start < nc; ++start) {
        if (col_seen[static_cast<std::size_t>(start)] || col_adj[static_cast<std::size_t>(start)].size() != 1) continue;
        Path path;
        Index col = start;
        while (true) {
            col_seen[static_cast<std::size_t>(col)] = true;
            path.cols.push_back(col);
            Index next_row = -1;
            for (Index r : col_adj[static_cast<std::size_t>(col)]) {
                if (!row_seen[static_cast<std::size_t>(r)]) next_row = r;
            }
            if (next_row < 0) break;
            row_seen[static_cast<std::size_t>(next_row)] = true;
            path.rows.push_back(next_row);
            Index next_col = -1;
            for (Index c : row_adj[static_cast<std::size_t>(next_row)]) {
                if (!col_seen[static_cast<std::size_t>(c)]) next_col = c;
            }
            if (next_col < 0) break;
            col = next_col;
        }
        paths.push_back(std::move(path));
    }
    if (std::find(row_seen.begin(), row_seen.end(), false) != row_seen.end() ||
        std::find(col_seen.begin(), col_seen.end(), false) != col_seen.end()) {
        throw ConsistencyError("row/column graph is not a union of paths starting at columns");
    }

    std::stable_sort(paths.begin(), paths.end(), [](const Path& a, const Path& b) {
        const bool a_n = a.cols.size() > a.rows.size();
        const bool b_n = b.cols.size() > b.rows.size();
        if (a_n != b_n) return !a_n;
        return a.rows.size() < b.rows.size();
    });

    BidiagonalDecomposition out;
    for (const Path& p : paths) {
        out.perm_rows.insert(out.perm_rows.end(), p.rows.begin(), p.rows.end());
        out.perm_cols.insert(out.perm_cols.end(), p.cols.begin(), p.cols.end());
        const bool n_type = p.cols.size() == p.rows.size() + 1;
        if (!n_type && p.cols.size() != p.rows.size()) throw ConsistencyError("path with more rows than columns");
        out.blocks.push_back({n_type ? 'N' : 'M', static_cast<Index>(p.rows.size())});
    }

    std::vector<BidiagonalBlock> expected;
    for (Index j = 1; j <= k; ++j) {
        expected.push_back({'M', 2 * j - 1});
        expected.push_back({'M', 2 * j - 1});
    }
    expected.push_back({'N', 2 * k});
    bool same = expected.size() == out.blocks.size();
    for (std::size_t i = 0; same && i < expected.size(); ++i) {
        same = expected[i].kind == out.blocks[i].kind && expected[i].size == out.blocks[i].size;
    }
    if (!same) throw ConsistencyError("block sequence differs from M1,M1,M3,M3,...,N_2k");

    out.permuted.resize(nr, nc);
    for (Index i = 0; i < nr; ++i) {
        for (Index j = 0; j < nc; ++j) {
            out.permuted(i, j) = W(out.perm_rows[static_cast<std::size_t>(i)], out.perm_cols[static_cast<std::size_t>(j)]);
        }
    }
    out.direct_sum = Matrix::Zero(nr, nc);
    Index r0 = 0;
    Index c0 = 0;
    for (const BidiagonalBlock& b : out.blocks) {
        out.direct_sum.block(r0, c0, b.rows(), b.cols()) = b.kind == 'M' ? bidiagonal_M(b.size) : bidiagonal_N(b.size);
        r0 += b.rows();
        c0 += b.cols();
    }
    if (!(out.permuted.array() == out.direct_sum.array()).all()) {
        throw ConsistencyError("permuted matrix is not the expected direct sum");
    }

    std::vector<double> from_blocks;
    for (const BidiagonalBlock& b : out.blocks) {
        const RealVector s = singular_values(b.kind == 'M' ? bidiagonal_M(b.size) : bidiagonal_N(b.size));
        from_blocks.insert(from_blocks.end(), s.begin(), s.end());
    }
    std::sort(from_blocks.begin(), from_blocks.end());
    RealVector whole = singular_values(W);
    std::vector<double> from_whole(whole.begin(), whole.end());
    std::sort(from_whole.begin(), from_whole.end());
    if (from_whole.size() != from_blocks.size()) throw ConsistencyError("singular value counts differ");
    for (std::size_t i = 0; i < from_whole.size(); ++i) {
        out.singular_value_gap = std::max(out.singular_value_gap, std::abs(from_whole[i] - from_blocks[i]));
    }
    if (out.singular_value_gap > 1e-12) throw ConsistencyError("singular value multisets differ");
    return out;
}

} // namespace ratpencil
