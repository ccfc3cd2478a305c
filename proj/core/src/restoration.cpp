#include "ratpencil/restoration.hpp"

#include "ratpencil/eigensolver.hpp"
#include "ratpencil/linalg.hpp"
#include "ratpencil/pencil_core.hpp"
#include "ratpencil/sylvester.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace ratpencil {

namespace {

enum Unknown { kX21, kY23, kX32, kY12, kX31, kY13 };
enum Equation { kE23, kE32, kE33 };

struct Shape {
    Index r = 0;
    Index c = 0;
    Index size() const { return r * c; }
};

struct Step1Grid {
    std::array<Shape, 6> unknown;
    std::array<Index, 7> col_off{};
    std::array<Shape, 3> equation;
    std::array<Index, 4> row_off{};
};

Step1Grid step1_grid(const BlockLayout& L) {
    const Index rs1 = L.row_size(1), rs2 = L.row_size(2), rs3 = L.row_size(3);
    const Index cs1 = L.col_size(1), cs2 = L.col_size(2), cs3 = L.col_size(3);
    Step1Grid g;
    g.unknown = {Shape{rs2, rs1}, Shape{cs2, cs3}, Shape{rs3, rs2}, Shape{cs1, cs2}, Shape{rs3, rs1}, Shape{cs1, cs3}};
    g.equation = {Shape{rs2, cs3}, Shape{rs3, cs2}, Shape{rs3, cs3}};
    for (std::size_t u = 0; u < 6; ++u) g.col_off[u + 1] = g.col_off[u] + g.unknown[u].size();
    for (std::size_t e = 0; e < 3; ++e) g.row_off[e + 1] = g.row_off[e] + 2 * g.equation[e].size();
    return g;
}

Pencil blk(const Pencil& s, const BlockLayout& L, int i, int j) {
    return s.block(L.row_offset(i), L.col_offset(j), L.row_size(i), L.col_size(j));
}

void put(Pencil& s, const BlockLayout& L, int i, int j, const Pencil& b) {
    s.set_block(L.row_offset(i), L.col_offset(j), b);
}

double tolerance(const Pencil& s) { return 1e3 * kEpsM * norm(s); }

Pencil triple(const Matrix& X, const Pencil& G, const Matrix& Y) { return Pencil(X * G.p0 * Y, X * G.p1 * Y); }

Vector stack(const std::array<Pencil, 3>& eqs) {
    Index total = 0;
    for (const Pencil& p : eqs) total += 2 * p.p0.size();
    Vector out(total);
    Index off = 0;
    for (const Pencil& p : eqs) {
        out.segment(off, p.p0.size()) = vec(p.p0);
        off += p.p0.size();
        out.segment(off, p.p1.size()) = vec(p.p1);
        off += p.p1.size();
    }
    return out;
}

std::array<Matrix, 6> unpack(const Vector& x, const Step1Grid& g) {
    std::array<Matrix, 6> out;
    for (std::size_t u = 0; u < 6; ++u) {
        out[u] = unvec(x.segment(g.col_off[u], g.unknown[u].size()), g.unknown[u].r, g.unknown[u].c);
    }
    return out;
}

Vector quadratic_terms(const std::array<Matrix, 6>& v, const Pencil& s, const BlockLayout& L) {
    const Pencil S11 = blk(s, L, 1, 1), S12 = blk(s, L, 1, 2), S21 = blk(s, L, 2, 1), S22 = blk(s, L, 2, 2);
    const Matrix &X21 = v[kX21], &Y23 = v[kY23], &X32 = v[kX32], &Y12 = v[kY12], &X31 = v[kX31], &Y13 = v[kY13];
    const Pencil q23 = triple(X21, S11, Y13) + triple(X21, S12, Y23);
    const Pencil q32 = triple(X31, S11, Y12) + triple(X32, S21, Y12);
    const Pencil q33 =
        triple(X31, S11, Y13) + triple(X32, S21, Y13) + triple(X31, S12, Y23) + triple(X32, S22, Y23);
    return stack({q23, q32, q33});
}

// Largest deviation of the structural blocks from their exact form, after
// which they are overwritten with that form.
double snap_structure(Pencil& s, const BlockLayout& L, bool bc_blocks) {
    double dev = 0.0;
    auto snap = [&](int i, int j, const Pencil& target) {
        dev = std::max(dev, norm(blk(s, L, i, j) - target));
        put(s, L, i, j, target);
    };
    snap(2, 3, Pencil::zero(L.row_size(2), L.col_size(3)));
    snap(3, 2, Pencil::zero(L.row_size(3), L.col_size(2)));
    snap(3, 3, Pencil::zero(L.row_size(3), L.col_size(3)));
    if (L.eps > 0) snap(3, 1, structural_blocks(L.eps, L.n).Lkron);
    if (L.eta > 0) snap(1, 3, structural_blocks(L.eta, L.m).Lkron.transpose());
    snap(2, 2, Pencil::a_minus_lambda_b(blk(s, L, 2, 2).p0, identity(L.ell)));
    if (bc_blocks) {
        Pencil c = Pencil::zero(L.row_size(1), L.ell);
        c.p0.bottomRows(L.m) = blk(s, L, 1, 2).p0.bottomRows(L.m);
        snap(1, 2, c);
        Pencil b = Pencil::zero(L.ell, L.col_size(1));
        b.p0.rightCols(L.n) = blk(s, L, 2, 1).p0.rightCols(L.n);
        snap(2, 1, b);
    }
    return dev;
}

RestorationStep make_step(Matrix X, Matrix Y, const Pencil& before, const Pencil& after) {
    RestorationStep st;
    st.xy_norm = std::sqrt(X.squaredNorm() + Y.squaredNorm());
    st.X = std::move(X);
    st.Y = std::move(Y);
    st.step_delta_norm = norm(after - before);
    return st;
}

void check_layout(const Pencil& s, const BlockLayout& L) {
    if (s.rows() != L.rows() || s.cols() != L.cols()) {
        throw StructuralError("pencil is " + std::to_string(s.rows()) + "x" + std::to_string(s.cols()) +
                              " but the block grid needs " + std::to_string(L.rows()) + "x" +
                              std::to_string(L.cols()));
    }
}

double power_term(double v, Index p) { return std::max(1.0, std::pow(v, static_cast<double>(p))); }

} // namespace

Matrix step1_matrix(const Pencil& s, const BlockLayout& L) {
    check_layout(s, L);
    const Step1Grid g = step1_grid(L);
    Matrix T = Matrix::Zero(g.row_off[3], g.col_off[6]);
    auto place = [&](Equation e, Unknown u, const Matrix& c0, const Matrix& c1) {
        const Index rows = g.equation[e].size();
        const Index cols = g.unknown[u].size();
        if (rows == 0 || cols == 0) return;
        T.block(g.row_off[e], g.col_off[u], rows, cols) += c0;
        T.block(g.row_off[e] + rows, g.col_off[u], rows, cols) += c1;
    };
    // X·G: (Gᵀ ⊗ I)·vec X
    auto left = [&](Equation e, Unknown u, const Pencil& G) {
        const Matrix I = identity(g.unknown[u].r);
        place(e, u, kron(G.p0.transpose(), I), kron(G.p1.transpose(), I));
    };
    // G·Y: (I ⊗ G)·vec Y
    auto right = [&](Equation e, Unknown u, const Pencil& G) {
        const Matrix I = identity(g.unknown[u].c);
        place(e, u, kron(I, G.p0), kron(I, G.p1));
    };
    left(kE23, kX21, blk(s, L, 1, 3));
    right(kE23, kY23, blk(s, L, 2, 2));
    right(kE23, kY13, blk(s, L, 2, 1));
    left(kE32, kX32, blk(s, L, 2, 2));
    right(kE32, kY12, blk(s, L, 3, 1));
    left(kE32, kX31, blk(s, L, 1, 2));
    left(kE33, kX31, blk(s, L, 1, 3));
    right(kE33, kY13, blk(s, L, 3, 1));
    left(kE33, kX32, blk(s, L, 2, 3));
    right(kE33, kY23, blk(s, L, 3, 2));
    return T;
}

std::pair<RestorationStep, Pencil> step1_antitriangularize(const Pencil& s_hat, const BlockLayout& L,
                                                           const Step1Options& opts) {
    check_layout(s_hat, L);
    if (std::max(L.eps, L.eta) == 0 && L.row_size(3) + L.col_size(3) > 0) throw ArgumentError("bad layout");
    const Step1Grid g = step1_grid(L);
    const PseudoInverse pinv(step1_matrix(s_hat, L));
    const Vector c = stack({blk(s_hat, L, 2, 3), blk(s_hat, L, 3, 2), blk(s_hat, L, 3, 3)});
    const double stop = 1e-2 * kEpsM * norm(s_hat);

    Vector x = Vector::Zero(g.col_off[6]);
    int it = 0;
    while (true) {
        ++it;
        const Vector next = pinv.apply(c + quadratic_terms(unpack(x, g), s_hat, L));
        const double diff = (next - x).norm();
        x = next;
        if (!std::isfinite(diff)) throw ConvergenceError("anti-triangularization diverged", diff);
        if (diff <= stop) break;
        if (it >= opts.max_iter) {
            throw ConvergenceError("anti-triangularization did not converge in " + std::to_string(opts.max_iter) +
                                       " iterations",
                                   diff);
        }
    }

    const std::array<Matrix, 6> v = unpack(x, g);
    Matrix X = Matrix::Zero(L.rows(), L.rows());
    Matrix Y = Matrix::Zero(L.cols(), L.cols());
    X.block(L.row_offset(2), L.row_offset(1), L.row_size(2), L.row_size(1)) = v[kX21];
    X.block(L.row_offset(3), L.row_offset(1), L.row_size(3), L.row_size(1)) = v[kX31];
    X.block(L.row_offset(3), L.row_offset(2), L.row_size(3), L.row_size(2)) = v[kX32];
    Y.block(L.col_offset(1), L.col_offset(2), L.col_size(1), L.col_size(2)) = v[kY12];
    Y.block(L.col_offset(1), L.col_offset(3), L.col_size(1), L.col_size(3)) = v[kY13];
    Y.block(L.col_offset(2), L.col_offset(3), L.col_size(2), L.col_size(3)) = v[kY23];

    const Matrix left = identity(L.rows()) - X;
    const Matrix right = identity(L.cols()) - Y;
    Pencil s1 = left * s_hat * right;
    double dev = 0.0;
    for (auto [i, j] : {std::pair{2, 3}, std::pair{3, 2}, std::pair{3, 3}}) {
        dev = std::max(dev, norm(blk(s1, L, i, j)));
        put(s1, L, i, j, Pencil::zero(L.row_size(i), L.col_size(j)));
    }
    if (dev > tolerance(s_hat)) {
        throw ConvergenceError("anti-triangularization left a residual above tolerance", dev);
    }
    RestorationStep st = make_step(std::move(X), std::move(Y), s_hat, s1);
    st.iterations = it;
    st.snap_residual = dev;
    return {std::move(st), std::move(s1)};
}

std::pair<RestorationStep, Pencil> step2_restore_kronecker(const Pencil& s1, const BlockLayout& L) {
    check_layout(s1, L);
    Matrix X = Matrix::Zero(L.rows(), L.rows());
    Matrix Y = Matrix::Zero(L.cols(), L.cols());

    if (L.eps > 0) {
        const EquivalenceRestoration r = restore_equivalence(structural_blocks(L.eps, L.n).Lkron, blk(s1, L, 3, 1));
        if (!r.ok) throw ConsistencyError("L_eps block cannot be restored by strict equivalence");
        const Matrix X33 = r.X * (identity(r.X.rows()) + r.X).inverse();
        X.block(L.row_offset(3), L.row_offset(3), L.row_size(3), L.row_size(3)) = X33;
        Y.block(L.col_offset(1), L.col_offset(1), L.col_size(1), L.col_size(1)) = r.Y;
    }
    if (L.eta > 0) {
        const EquivalenceRestoration r =
            restore_equivalence(structural_blocks(L.eta, L.m).Lkron, blk(s1, L, 1, 3).transpose());
        if (!r.ok) throw ConsistencyError("L_eta block cannot be restored by strict equivalence");
        const Matrix Xt = r.X * (identity(r.X.rows()) + r.X).inverse();
        X.block(L.row_offset(1), L.row_offset(1), L.row_size(1), L.row_size(1)) = r.Y.transpose();
        Y.block(L.col_offset(3), L.col_offset(3), L.col_size(3), L.col_size(3)) = Xt.transpose();
    }
    const Matrix I_hat = -blk(s1, L, 2, 2).p1;
    const RealVector sv = singular_values(I_hat);
    if (sv(sv.size() - 1) <= static_cast<double>(L.ell) * kEpsM * sv(0)) {
        throw DegeneracyError("the lambda coefficient of the state block is numerically singular");
    }
    X.block(L.row_offset(2), L.row_offset(2), L.ell, L.ell) = identity(L.ell) - I_hat.inverse();

    Pencil s2 = (identity(L.rows()) - X) * s1 * (identity(L.cols()) - Y);
    const double dev = snap_structure(s2, L, false);
    if (dev > tolerance(s1)) throw ConsistencyError("Kronecker and identity blocks not restored to tolerance");
    RestorationStep st = make_step(std::move(X), std::move(Y), s1, s2);
    st.snap_residual = dev;
    return {std::move(st), std::move(s2)};
}

std::pair<RestorationStep, Pencil> step3_restore_BC(const Pencil& s2, const BlockLayout& L) {
    check_layout(s2, L);
    const Index m = L.m, n = L.n, ell = L.ell;
    const Matrix A_hat = blk(s2, L, 2, 2).p0;

    const Pencil c = blk(s2, L, 1, 2);
    Matrix X12 = Matrix::Zero(L.row_size(1), ell);
    Matrix Y32 = Matrix::Zero(L.col_size(3), ell);
    Matrix f_prev = Matrix::Zero(m, ell);
    for (Index i = 0; i <= L.eta; ++i) {
        const Matrix e = -c.p1.middleRows(i * m, m) - f_prev;
        X12.middleRows(i * m, m) = e;
        if (i < L.eta) {
            f_prev = c.p0.middleRows(i * m, m) - e * A_hat;
            Y32.middleRows(i * m, m) = f_prev;
        }
    }

    const Pencil b = blk(s2, L, 2, 1);
    Matrix Y21 = Matrix::Zero(ell, L.col_size(1));
    Matrix X23 = Matrix::Zero(ell, L.row_size(3));
    Matrix h_prev = Matrix::Zero(ell, n);
    for (Index j = 0; j <= L.eps; ++j) {
        const Matrix gj = -b.p1.middleCols(j * n, n) - h_prev;
        Y21.middleCols(j * n, n) = gj;
        if (j < L.eps) {
            h_prev = b.p0.middleCols(j * n, n) - A_hat * gj;
            X23.middleCols(j * n, n) = h_prev;
        }
    }

    Matrix X = Matrix::Zero(L.rows(), L.rows());
    Matrix Y = Matrix::Zero(L.cols(), L.cols());
    X.block(L.row_offset(1), L.row_offset(2), L.row_size(1), ell) = X12;
    X.block(L.row_offset(2), L.row_offset(3), ell, L.row_size(3)) = X23;
    Y.block(L.col_offset(2), L.col_offset(1), ell, L.col_size(1)) = Y21;
    Y.block(L.col_offset(3), L.col_offset(2), L.col_size(3), ell) = Y32;

    Pencil s3 = (identity(L.rows()) - X) * s2 * (identity(L.cols()) - Y);
    const double dev = snap_structure(s3, L, true);
    if (dev > tolerance(s2)) throw ConsistencyError("B and C blocks not restored to tolerance");
    RestorationStep st = make_step(std::move(X), std::move(Y), s2, s3);
    st.snap_residual = dev;
    return {std::move(st), std::move(s3)};
}

BoundReport bound_constants(const RationalQuadruple& q, const BlockKroneckerPencil& S, double delta_norm) {
    const BlockLayout& L = S.layout;
    BoundReport r;
    const double a2 = spectral_norm(q.A);
    const double b2 = spectral_norm(q.B);
    const double c2 = spectral_norm(q.C);
    const auto eps = static_cast<double>(L.eps);
    const auto eta = static_cast<double>(L.eta);
    const double sqrt2 = std::numbers::sqrt2;
    const double sqrt3 = std::numbers::sqrt3;

    r.alpha = 1.0 + 2.0 * eps * power_term(a2, L.eps);
    r.beta = 1.0 + 2.0 * eta * power_term(a2, L.eta);
    r.gamma = (eps + eta) / (2.0 * sqrt2);
    r.s = std::max({r.alpha, r.beta, r.gamma}) + r.gamma * (r.beta * b2 + r.alpha * c2);
    r.sigma_minT = sigma_min(step1_matrix(S.S, L));

    r.t = std::max(L.eps, L.eta);
    const auto t = static_cast<double>(r.t);
    r.f1 = 4.0 * sqrt2 * r.s / (2.0 - sqrt3);
    r.f2 = sqrt2 * (4.0 * t - 1.0) / 3.0;
    r.f3 = sqrt2 * (1.0 + 2.0 * t * power_term(a2, r.t));

    r.norm_S_fro = norm(S.S);
    r.norm_S_2 = norm(S.S, NormKind::spectral);
    r.norm_R = norm(q);
    r.K_SR = recover_D_factor(L.eps, L.eta) * (1.0 + r.f1 * r.norm_S_2) * (1.0 + r.f2 * r.norm_S_2) *
             (1.0 + r.f3 * r.norm_S_2) * r.norm_S_fro / r.norm_R;
    r.q = (L.eps > 0 && L.eta > 0) ? 5.0 : 4.5;
    r.g = r.K_SR / (std::pow(t, r.q) * std::sqrt(static_cast<double>(L.m + L.n)));

    r.delta_norm = delta_norm;
    r.delta = delta_norm / r.norm_S_fro;
    const double d = norm(q.D);
    const double fixed = std::sqrt(d * d + q.A.squaredNorm() + static_cast<double>(L.ell) + q.B.squaredNorm() +
                                   q.C.squaredNorm());
    const double ratio = (2.0 - sqrt3) / (4.0 * r.s);
    r.smallness_threshold = ratio * ratio / (1.0 + fixed);
    r.smallness_holds = delta_norm < r.smallness_threshold;
    r.step1_bound = 4.0 * r.s * delta_norm / (2.0 - sqrt3);
    r.omega_cap = fixed + delta_norm;
    r.sigma = r.sigma_minT;
    r.contraction_holds = r.sigma > 0.0;
    return r;
}

void add_perturbation_terms(BoundReport& rep, const BlockKroneckerPencil& S, const Pencil& delta) {
    const BlockLayout& L = S.layout;
    rep.deltaT_norm = spectral_norm(step1_matrix(delta, L));
    rep.sigma = rep.sigma_minT - rep.deltaT_norm;
    const double d23 = norm(blk(delta, L, 2, 3));
    const double d32 = norm(blk(delta, L, 3, 2));
    const double d33 = norm(blk(delta, L, 3, 3));
    rep.theta = std::sqrt(d23 * d23 + d32 * d32 + d33 * d33);
    rep.contraction_holds = rep.sigma > 0.0 && rep.theta * rep.omega_cap / (rep.sigma * rep.sigma) < 0.25;
}

namespace {

RestorationResult finish(const Pencil& s_hat, const BlockLayout& L, std::vector<RestorationStep> steps,
                         const Pencil& s_final, const Pencil& s_before_last,
                         const std::optional<RationalQuadruple>& nominal, bool linear) {
    RestorationResult res;
    Matrix left = identity(L.rows());
    Matrix right = identity(L.cols());
    for (const RestorationStep& st : steps) {
        left = (identity(L.rows()) - st.X) * left;
        right = right * (identity(L.cols()) - st.Y);
    }
    res.total_X = identity(L.rows()) - left;
    res.total_Y = identity(L.cols()) - right;
    res.restored = BlockKroneckerPencil{s_final, L};
    const std::vector<std::string> bad = structure_violations(res.restored);
    if (!bad.empty()) throw ConsistencyError("restored pencil is not structured: " + bad.front());
    res.equivalence_residual = norm(left * s_hat * right - s_final);
    if (res.equivalence_residual > tolerance(s_hat)) {
        res.warnings.push_back("composed transformation reproduces the restored pencil only to " +
                               std::to_string(res.equivalence_residual));
    }
    res.quadruple = extract_quadruple(res.restored);
    const double dn = norm(res.quadruple.D);
    if (norm(res.quadruple.D.coeffs.back()) < kEpsM * dn) {
        res.warnings.push_back("leading coefficient of the restored D is negligible");
    }

    if (L.rows() == L.cols()) {
        const GeneralizedEigenvalues before = qz(s_hat);
        const GeneralizedEigenvalues after = qz(s_final);
        res.eigenvalue_mismatch = match_eigenvalues(before.finite(), after.finite());
        if (!(res.eigenvalue_mismatch <= 1e-6)) {
            throw ConsistencyError("restored pencil is not strictly equivalent: eigenvalues differ by " +
                                   std::to_string(res.eigenvalue_mismatch));
        }
    }

    if (nominal) {
        const BlockKroneckerPencil S = linear ? build_linear_S(*nominal) : build_S(*nominal, L.eps, L.eta);
        if (S.S.rows() != s_hat.rows() || S.S.cols() != s_hat.cols()) {
            throw StructuralError("unperturbed quadruple does not match the perturbed pencil");
        }
        const Pencil delta = s_hat - S.S;
        const double dnorm = norm(delta);

        Pencil cur = s_hat;
        for (std::size_t k = 0; k < steps.size(); ++k) {
            cur = (identity(L.rows()) - steps[k].X) * cur * (identity(L.cols()) - steps[k].Y);
            if (k + 1 == steps.size()) cur = s_final;
            steps[k].cumulative_delta_norm = norm(cur - S.S);
        }

        const RationalQuadruple& q0 = *nominal;
        const RationalQuadruple& q1 = res.quadruple;
        double num = (q1.A - q0.A).squaredNorm() + (q1.B - q0.B).squaredNorm() + (q1.C - q0.C).squaredNorm();
        const int d0 = std::max(q0.degree(), q1.degree());
        double dd = 0.0;
        for (int k = 0; k <= d0; ++k) {
            const auto kk = static_cast<std::size_t>(k);
            const Matrix a = k <= q1.degree() ? q1.D.coeffs[kk] : Matrix::Zero(q1.m(), q1.n());
            const Matrix b = k <= q0.degree() ? q0.D.coeffs[kk] : Matrix::Zero(q0.m(), q0.n());
            dd += (a - b).squaredNorm();
        }
        num += dd;
        res.backward_error_lhs = std::sqrt(num) / norm(q0);
        res.d_change = std::sqrt(dd);
        res.m_change = norm(res.restored.block(1, 1) - S.block(1, 1));

        if (linear) {
            const double f = 1.0 + std::numbers::sqrt2 * norm(S.S, NormKind::spectral);
            res.linear_bound_factor = f * f;
            res.linear_change = norm(s_final - S.S);
        } else {
            BoundReport rep = bound_constants(q0, S, dnorm);
            add_perturbation_terms(rep, S, delta);
            if (!rep.certified()) {
                res.warnings.push_back("perturbation exceeds the sufficient conditions; bounds not certified");
            }
            const auto t = static_cast<double>(rep.t);
            if (rep.smallness_holds) steps[0].bound = rep.step1_bound;
            steps[1].bound = (4.0 * t - 1.0) / 3.0 * *steps[0].cumulative_delta_norm;
            const double a_hat = spectral_norm(s_before_last.block(L.row_offset(2), L.col_offset(2), L.ell, L.ell).p0);
            steps[2].bound = (1.0 + 2.0 * t * power_term(a_hat, rep.t)) * *steps[1].cumulative_delta_norm;
            res.bounds = rep;
        }
    }
    res.steps = std::move(steps);
    return res;
}

} // namespace

RestorationResult restore(const Pencil& s_hat, const BlockLayout& layout,
                          const std::optional<RationalQuadruple>& nominal) {
    if (std::max(layout.eps, layout.eta) == 0) {
        throw ArgumentError("restore needs max(eps, eta) > 0; use restore_linear for linear polynomial parts");
    }
    check_layout(s_hat, layout);
    auto [st1, s1] = step1_antitriangularize(s_hat, layout);
    auto [st2, s2] = step2_restore_kronecker(s1, layout);
    auto [st3, s3] = step3_restore_BC(s2, layout);
    std::vector<RestorationStep> steps;
    steps.push_back(std::move(st1));
    steps.push_back(std::move(st2));
    steps.push_back(std::move(st3));
    return finish(s_hat, layout, std::move(steps), s3, s2, nominal, false);
}

RestorationResult restore_linear(const Pencil& s_hat, Index m, Index n, Index ell,
                                 const std::optional<RationalQuadruple>& nominal) {
    const BlockLayout layout{m, n, ell, 0, 0};
    check_layout(s_hat, layout);
    auto [st2, s2] = step2_restore_kronecker(s_hat, layout);
    auto [st3, s3] = step3_restore_BC(s2, layout);
    std::vector<RestorationStep> steps;
    steps.push_back(std::move(st2));
    steps.push_back(std::move(st3));
    return finish(s_hat, layout, std::move(steps), s3, s2, nominal, true);
}

} // namespace ratpencil
