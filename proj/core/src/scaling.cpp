#include "ratpencil/scaling.hpp"

#include "ratpencil/pencil_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace ratpencil {

namespace {

constexpr int kMaxSweeps = 20;

double round_pow2(double x) { return std::exp2(std::round(std::log2(x))); }

Matrix similarity(const Matrix& A, const RealVector& t) {
    Matrix out = A;
    for (Index j = 0; j < A.cols(); ++j) {
        for (Index i = 0; i < A.rows(); ++i) out(i, j) *= t(j) / t(i);
    }
    return out;
}

Matrix left_inverse_scale(const Matrix& B, const RealVector& t) {
    Matrix out = B;
    for (Index i = 0; i < B.rows(); ++i) out.row(i) /= t(i);
    return out;
}

Matrix right_scale(const Matrix& C, const RealVector& t) {
    Matrix out = C;
    for (Index j = 0; j < C.cols(); ++j) out.col(j) *= t(j);
    return out;
}

double d_norm_term(const PolyMatrix& D, double d_lambda) {
    double sum = 0.0;
    for (std::size_t i = 0; i < D.coeffs.size(); ++i) {
        const double f = std::pow(d_lambda, -static_cast<double>(i));
        sum += f * f * D.coeffs[i].squaredNorm();
    }
    return std::sqrt(sum);
}

// 1/d_R before any rounding.
double d_R_denominator(const RationalQuadruple& q, const RealVector& t, double d_lambda) {
    const double b = left_inverse_scale(q.B, t).squaredNorm();
    const double c = right_scale(q.C, t).squaredNorm();
    return std::max({d_lambda * b, d_lambda * c, d_norm_term(q.D, d_lambda)});
}

} // namespace

bool is_power_of_two(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) return false;
    int e = 0;
    return std::frexp(x, &e) == 0.5;
}

namespace {

// Diagonal similarity only, without the global factor.
RealVector balance_similarity(const Matrix& A, bool pow2) {
    const Index ell = A.rows();
    RealVector t = RealVector::Ones(ell);
    Matrix work = A;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool changed = false;
        for (Index i = 0; i < ell; ++i) {
            const double c = std::sqrt(std::max(0.0, work.col(i).squaredNorm() - std::norm(work(i, i))));
            const double r = std::sqrt(std::max(0.0, work.row(i).squaredNorm() - std::norm(work(i, i))));
            if (c == 0.0 || r == 0.0) continue;
            double f = std::sqrt(r / c);
            if (pow2) f = round_pow2(f);
            if (f == 1.0) continue;
            if ((r / f) * (r / f) + (c * f) * (c * f) >= 0.95 * (r * r + c * c)) continue;
            t(i) *= f;
            work.col(i) *= f;
            work.row(i) /= f;
            changed = true;
        }
        if (!changed) break;
    }
    return t;
}

// 2^(h/2), rounded the same way for every h of one parity so that ratios
// and products of such numbers stay exact powers of two after snapping.
double half_pow2(int h) {
    const int whole = h >= 0 ? h / 2 : -((-h + 1) / 2);
    const bool odd = h - 2 * whole != 0;
    return std::ldexp(odd ? std::numbers::sqrt2 : 1.0, whole);
}

struct Factors {
    bool snap = false;
    double operator()(double x) const { return snap ? round_pow2(x) : x; }
};

} // namespace

RealVector balance(const Matrix& A, const Matrix& B, const Matrix& C, bool pow2) {
    if (A.rows() != A.cols()) throw StructuralError("balance needs a square A");
    RealVector t = balance_similarity(A, pow2);
    const double nb = left_inverse_scale(B, t).norm();
    const double nc = right_scale(C, t).norm();
    if (nb > 0.0 && nc > 0.0) {
        double kappa = std::sqrt(nb / nc);
        if (pow2) kappa = round_pow2(kappa);
        t *= kappa;
    }
    return t;
}

RationalQuadruple apply_scaling(const RationalQuadruple& q, const ScalingResult& sr) {
    const Index ell = q.ell();
    if (sr.T_diag.size() != ell) throw StructuralError("scaling does not match the state dimension");
    const Factors f{sr.pow2};
    const double r = std::sqrt(sr.d_lambda * sr.d_R);
    const RealVector& t = sr.T_diag;
    Matrix A = q.A, B = q.B, C = q.C;
    for (Index j = 0; j < ell; ++j) {
        for (Index i = 0; i < ell; ++i) A(i, j) *= f(sr.d_lambda * (t(j) / t(i)));
    }
    for (Index i = 0; i < ell; ++i) B.row(i) *= f(r / t(i));
    for (Index j = 0; j < ell; ++j) C.col(j) *= f(r * t(j));
    std::vector<Matrix> d;
    d.reserve(q.D.coeffs.size());
    for (std::size_t i = 0; i < q.D.coeffs.size(); ++i) {
        d.push_back(f(sr.d_R * std::pow(sr.d_lambda, -static_cast<double>(i))) * q.D.coeffs[i]);
    }
    return RationalQuadruple(std::move(A), std::move(B), std::move(C), PolyMatrix(std::move(d)));
}

RationalQuadruple unscale_quadruple(const RationalQuadruple& q_hat, const ScalingResult& sr) {
    const Index ell = q_hat.ell();
    if (sr.T_diag.size() != ell) throw StructuralError("scaling does not match the state dimension");
    const Factors f{sr.pow2};
    const double r = std::sqrt(sr.d_lambda * sr.d_R);
    const RealVector& t = sr.T_diag;
    Matrix A = q_hat.A, B = q_hat.B, C = q_hat.C;
    for (Index j = 0; j < ell; ++j) {
        for (Index i = 0; i < ell; ++i) A(i, j) *= f(t(i) / (t(j) * sr.d_lambda));
    }
    for (Index i = 0; i < ell; ++i) B.row(i) *= f(t(i) / r);
    for (Index j = 0; j < ell; ++j) C.col(j) *= f(1.0 / (r * t(j)));
    std::vector<Matrix> d;
    d.reserve(q_hat.D.coeffs.size());
    for (std::size_t i = 0; i < q_hat.D.coeffs.size(); ++i) {
        d.push_back(f(std::pow(sr.d_lambda, static_cast<double>(i)) / sr.d_R) * q_hat.D.coeffs[i]);
    }
    return RationalQuadruple(std::move(A), std::move(B), std::move(C), PolyMatrix(std::move(d)));
}

std::pair<RationalQuadruple, ScalingResult> scale_quadruple(const RationalQuadruple& q, bool pow2) {
    q.validate();
    ScalingResult sr;
    sr.pow2 = pow2;

    if (!pow2) {
        sr.T_diag = balance(q.A, q.B, q.C, false);
        const double na = similarity(q.A, sr.T_diag).norm();
        sr.d_lambda = na > 1.0 ? 1.0 / na : 1.0;
        const double den = d_R_denominator(q, sr.T_diag, sr.d_lambda);
        sr.d_R = den > 0.0 ? 1.0 / den : 1.0;
        return {apply_scaling(q, sr), sr};
    }

    // With T = 2^(h/2)·T0 and d_λ = 2^a, d_R = 2^b, every multiplier is a
    // power of two exactly when a + b − h is even. Search small moves of
    // (a, h, b) around the unrounded optimum for one that also keeps the
    // largest of ‖B̂‖, ‖Ĉ‖, ‖D̂‖ in [1/2, 1].
    const RealVector t0 = balance_similarity(q.A, true);
    const double x0 = left_inverse_scale(q.B, t0).squaredNorm();
    const double y0 = right_scale(q.C, t0).squaredNorm();
    const double na = similarity(q.A, t0).norm();
    const int a0 = na > 1.0 ? static_cast<int>(std::floor(-std::log2(na))) : 0;
    const int h0 = (x0 > 0.0 && y0 > 0.0) ? static_cast<int>(std::lround(std::log2(x0 / y0) / 2.0)) : 0;

    struct Candidate {
        int a, h, b;
        double max_norm;
    };
    auto evaluate = [&](int a, int h, int db) {
        const double dl = std::ldexp(1.0, a);
        const double x = std::ldexp(x0, -h), y = std::ldexp(y0, h);
        const double dn = d_norm_term(q.D, dl);
        const double den = std::max({dl * x, dl * y, dn});
        int b = 0;
        if (den > 0.0) {
            b = static_cast<int>(std::floor(-std::log2(den)));
            if (std::ldexp(den, b) > 1.0) --b;
        }
        b -= db;
        const double mx = std::max({std::sqrt(std::ldexp(dl * x, b)), std::sqrt(std::ldexp(dl * y, b)),
                                    std::ldexp(dn, b)});
        return Candidate{a, h, b, mx};
    };

    const std::pair<int, int> moves[] = {{0, 0}, {0, 1}, {1, 0}, {-1, 0}, {1, 1}, {-1, 1}, {2, 0}, {-2, 0}, {2, 1}, {-2, 1}};
    std::optional<Candidate> chosen, fallback;
    for (int da = 0; da <= 2 && !chosen; ++da) {
        for (const auto& [dh, db] : moves) {
            const Candidate c = evaluate(a0 - da, h0 + dh, db);
            if ((c.a + c.b - c.h) % 2 != 0) continue;
            if (c.max_norm <= 1.0 && c.max_norm >= 0.5) {
                chosen = c;
                break;
            }
            if (c.max_norm <= 1.0 && (!fallback || c.max_norm > fallback->max_norm)) fallback = c;
        }
    }
    if (!chosen) chosen = fallback;
    if (!chosen) throw ConsistencyError("no power-of-two scaling found");

    sr.T_diag = t0 * half_pow2(chosen->h);
    sr.d_lambda = std::ldexp(1.0, chosen->a);
    sr.d_R = std::ldexp(1.0, chosen->b);
    return {apply_scaling(q, sr), sr};
}

std::pair<RealVector, RealVector> pencil_scalings(const BlockLayout& L, const ScalingResult& sr) {
    if (sr.T_diag.size() != L.ell) throw StructuralError("scaling does not match the state dimension");
    const double sr_half = std::sqrt(sr.d_R);
    const double sl_half = std::sqrt(sr.d_lambda);
    auto p = [&](Index k) { return std::pow(sr.d_lambda, static_cast<double>(k)); };

    RealVector left(L.rows());
    Index o = 0;
    for (Index k = L.eta; k >= 0; --k, o += L.m) left.segment(o, L.m).setConstant(sr_half * p(-k));
    for (Index i = 0; i < L.ell; ++i) left(o++) = sl_half / sr.T_diag(i);
    for (Index k = L.eps; k >= 1; --k, o += L.n) left.segment(o, L.n).setConstant(p(k) / sr_half);

    RealVector right(L.cols());
    o = 0;
    for (Index k = L.eps; k >= 0; --k, o += L.n) right.segment(o, L.n).setConstant(sr_half * p(-k));
    for (Index i = 0; i < L.ell; ++i) right(o++) = sl_half * sr.T_diag(i);
    for (Index k = L.eta; k >= 1; --k, o += L.m) right.segment(o, L.m).setConstant(p(k) / sr_half);
    return {left, right};
}

BlockKroneckerPencil scale_pencil(const BlockKroneckerPencil& S, const ScalingResult& sr) {
    const auto [left, right] = pencil_scalings(S.layout, sr);
    if (S.S.rows() != left.size() || S.S.cols() != right.size()) {
        throw StructuralError("pencil does not match its block layout");
    }
    const auto dl = left.cast<Complex>().asDiagonal();
    const auto dr = right.cast<Complex>().asDiagonal();
    Pencil out(dl * S.S.p0 * dr, dl * (S.S.p1 / sr.d_lambda) * dr);
    return BlockKroneckerPencil{std::move(out), S.layout};
}

std::vector<Complex> unscale_eigenvalues(const std::vector<Complex>& vals, const ScalingResult& sr) {
    std::vector<Complex> out;
    out.reserve(vals.size());
    for (const Complex& v : vals) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            out.push_back(v);
        } else {
            out.push_back(v / sr.d_lambda);
        }
    }
    return out;
}

} // namespace ratpencil
