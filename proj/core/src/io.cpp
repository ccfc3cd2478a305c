#include "ratpencil/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace ratpencil::io {

namespace {

std::string next_token(std::istream& in, const char* what) {
    std::string tok;
    if (!(in >> tok)) throw IoError(std::string("unexpected end of input while reading ") + what);
    return tok;
}

double parse_double(const std::string& tok) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') throw IoError("not a number: '" + tok + "'");
    return v;
}

Index parse_index(const std::string& tok) {
    char* end = nullptr;
    const long long v = std::strtoll(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0' || v < 0) throw IoError("not a size: '" + tok + "'");
    return static_cast<Index>(v);
}

bool is_real(const Matrix& a) {
    for (Index j = 0; j < a.cols(); ++j) {
        for (Index i = 0; i < a.rows(); ++i) {
            if (a(i, j).imag() != 0.0) return false;
        }
    }
    return true;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, sep)) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    return out;
}

bool is_number(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return *end == '\0';
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

} // namespace

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Matrix read_matrix(std::istream& in) {
    const Index rows = parse_index(next_token(in, "matrix header"));
    const Index cols = parse_index(next_token(in, "matrix header"));
    const std::string kind = next_token(in, "matrix header");
    if (kind != "complex" && kind != "real") throw IoError("matrix kind must be complex or real, got " + kind);
    const bool cplx = kind == "complex";
    Matrix a(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            const double re = parse_double(next_token(in, "matrix entries"));
            const double im = cplx ? parse_double(next_token(in, "matrix entries")) : 0.0;
            a(i, j) = Complex(re, im);
        }
    }
    return a;
}

void write_matrix(std::ostream& out, const Matrix& a) {
    const bool real = is_real(a);
    out << a.rows() << ' ' << a.cols() << ' ' << (real ? "real" : "complex") << '\n';
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            if (j > 0) out << ' ';
            out << format_double(a(i, j).real());
            if (!real) out << ' ' << format_double(a(i, j).imag());
        }
        out << '\n';
    }
}

Pencil read_pencil(std::istream& in) {
    Matrix p0 = read_matrix(in);
    Matrix p1 = read_matrix(in);
    if (p0.rows() != p1.rows() || p0.cols() != p1.cols()) throw IoError("pencil coefficients differ in size");
    return Pencil(std::move(p0), std::move(p1));
}

void write_pencil(std::ostream& out, const Pencil& p) {
    write_matrix(out, p.p0);
    out << '\n';
    write_matrix(out, p.p1);
}

PolyMatrix read_polymatrix(std::istream& in) {
    if (next_token(in, "polynomial header") != "degree") throw IoError("polynomial matrix must start with 'degree'");
    const Index d = parse_index(next_token(in, "polynomial degree"));
    std::vector<Matrix> c;
    for (Index k = 0; k <= d; ++k) c.push_back(read_matrix(in));
    try {
        return PolyMatrix(std::move(c));
    } catch (const Error& e) {
        throw IoError(e.what());
    }
}

void write_polymatrix(std::ostream& out, const PolyMatrix& p) {
    out << "degree " << p.degree() << '\n';
    for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
        if (k > 0) out << '\n';
        write_matrix(out, p.coeffs[k]);
    }
}

RationalQuadruple read_quadruple(std::istream& in) {
    if (next_token(in, "quadruple header") != "QUAD") throw IoError("quadruple file must start with QUAD");
    const Index m = parse_index(next_token(in, "quadruple header"));
    const Index n = parse_index(next_token(in, "quadruple header"));
    const Index ell = parse_index(next_token(in, "quadruple header"));
    const Index d = parse_index(next_token(in, "quadruple header"));
    Matrix A = read_matrix(in);
    Matrix B = read_matrix(in);
    Matrix C = read_matrix(in);
    std::vector<Matrix> D;
    for (Index k = 0; k <= d; ++k) D.push_back(read_matrix(in));
    RationalQuadruple q;
    try {
        q = RationalQuadruple(std::move(A), std::move(B), std::move(C), PolyMatrix(std::move(D)));
        q.validate();
    } catch (const Error& e) {
        throw IoError(std::string("inconsistent quadruple: ") + e.what());
    }
    if (q.m() != m || q.n() != n || q.ell() != ell) throw IoError("quadruple header does not match its matrices");
    return q;
}

void write_quadruple(std::ostream& out, const RationalQuadruple& q) {
    out << "QUAD " << q.m() << ' ' << q.n() << ' ' << q.ell() << ' ' << q.degree() << '\n';
    write_matrix(out, q.A);
    out << '\n';
    write_matrix(out, q.B);
    out << '\n';
    write_matrix(out, q.C);
    for (const Matrix& d : q.D.coeffs) {
        out << '\n';
        write_matrix(out, d);
    }
}

RationalQuadruple load_quadruple(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    return read_quadruple(in);
}

void save_quadruple(const std::filesystem::path& path, const RationalQuadruple& q) {
    std::ofstream out = open_out(path);
    write_quadruple(out, q);
    if (!out) throw IoError("write failed: " + path.string());
}

Pencil load_pencil(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    return read_pencil(in);
}

void save_pencil(const std::filesystem::path& path, const Pencil& p) {
    std::ofstream out = open_out(path);
    write_pencil(out, p);
    if (!out) throw IoError("write failed: " + path.string());
}

bool is_quadruple_file(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    std::string tok;
    return (in >> tok) && tok == "QUAD";
}

void write_eigenvalues_csv(std::ostream& out, const GeneralizedEigenvalues& ev) {
    out << "re_alpha,im_alpha,re_beta,im_beta,finite\n";
    for (std::size_t i = 0; i < ev.pairs.size(); ++i) {
        const auto& [a, b] = ev.pairs[i];
        out << format_double(a.real()) << ',' << format_double(a.imag()) << ',' << format_double(b.real()) << ','
            << format_double(b.imag()) << ',' << (ev.is_finite[i] ? 1 : 0) << '\n';
    }
}

std::vector<Complex> read_eigenvalues_csv(std::istream& in) {
    std::vector<Complex> out;
    std::string line;
    while (std::getline(in, line)) {
        const std::vector<std::string> cells = split(line, ',');
        if (cells.empty() || cells[0].empty()) continue;
        if (!is_number(cells[0])) continue;
        if (cells.size() >= 5) {
            if (parse_double(cells[4]) == 0.0) continue;
            const Complex a(parse_double(cells[0]), parse_double(cells[1]));
            const Complex b(parse_double(cells[2]), parse_double(cells[3]));
            out.push_back(a / b);
        } else if (cells.size() >= 2) {
            out.emplace_back(parse_double(cells[0]), parse_double(cells[1]));
        } else {
            out.emplace_back(parse_double(cells[0]), 0.0);
        }
    }
    return out;
}

void write_backward_error_csv(std::ostream& out, const GlobalBackwardError& r) {
    out << "re,im,r_local,g,sigma_min\n";
    for (const LocalBackwardError& l : r.per_eig) {
        out << format_double(l.lambda.real()) << ',' << format_double(l.lambda.imag()) << ','
            << format_double(l.r_local) << ',' << format_double(l.g_value) << ',' << format_double(l.sigma_min)
            << '\n';
    }
    out << "\nr,r_relative\n" << format_double(r.r) << ',' << format_double(r.r_relative) << '\n';
}

void write_scaling(std::ostream& out, const ScalingResult& sr) {
    out << "d_lambda=" << format_double(sr.d_lambda) << '\n';
    out << "d_R=" << format_double(sr.d_R) << '\n';
    out << "T=";
    for (Index i = 0; i < sr.T_diag.size(); ++i) out << (i > 0 ? " " : "") << format_double(sr.T_diag(i));
    out << '\n';
    out << "pow2=" << (sr.pow2 ? "true" : "false") << '\n';
}

ScalingResult read_scaling(std::istream& in) {
    const auto kv = read_key_values(in);
    ScalingResult sr;
    auto need = [&](const std::string& k) -> const std::string& {
        const auto it = kv.find(k);
        if (it == kv.end()) throw IoError("scaling file lacks " + k);
        return it->second;
    };
    sr.d_lambda = parse_double(need("d_lambda"));
    sr.d_R = parse_double(need("d_R"));
    std::istringstream ts(need("T"));
    std::vector<double> t;
    std::string tok;
    while (ts >> tok) t.push_back(parse_double(tok));
    sr.T_diag = Eigen::Map<RealVector>(t.data(), static_cast<Index>(t.size()));
    const auto it = kv.find("pow2");
    sr.pow2 = it != kv.end() && it->second == "true";
    return sr;
}

void write_restoration_report(std::ostream& out, const RestorationResult& r) {
    out << "step,xy_norm,step_delta_norm,cumulative_delta_norm,bound,snap_residual,iterations\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (std::size_t k = 0; k < r.steps.size(); ++k) {
        const RestorationStep& s = r.steps[k];
        out << k + 1 << ',' << format_double(s.xy_norm) << ',' << format_double(s.step_delta_norm) << ','
            << opt(s.cumulative_delta_norm) << ',' << opt(s.bound) << ',' << format_double(s.snap_residual) << ','
            << s.iterations << '\n';
    }
    out << "\nquantity,value\n";
    out << "equivalence_residual," << format_double(r.equivalence_residual) << '\n';
    out << "eigenvalue_mismatch," << format_double(r.eigenvalue_mismatch) << '\n';
    if (r.backward_error_lhs) out << "backward_error_lhs," << format_double(*r.backward_error_lhs) << '\n';
    if (r.d_change) out << "d_change," << format_double(*r.d_change) << '\n';
    if (r.m_change) out << "m_change," << format_double(*r.m_change) << '\n';
    if (r.linear_bound_factor) out << "linear_bound_factor," << format_double(*r.linear_bound_factor) << '\n';
    if (r.bounds) {
        const BoundReport& b = *r.bounds;
        out << "K_SR," << format_double(b.K_SR) << '\n';
        out << "g," << format_double(b.g) << '\n';
        out << "delta," << format_double(b.delta) << '\n';
        out << "K_SR_times_delta," << format_double(b.K_SR * b.delta) << '\n';
        out << "smallness_threshold," << format_double(b.smallness_threshold) << '\n';
        out << "smallness_holds," << (b.smallness_holds ? 1 : 0) << '\n';
        out << "contraction_holds," << (b.contraction_holds ? 1 : 0) << '\n';
    }
    for (const std::string& w : r.warnings) out << "warning," << w << '\n';
}

std::map<std::string, std::string> read_key_values(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw IoError("line " + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto f = s.find_first_not_of(" \t\r");
            const auto l = s.find_last_not_of(" \t\r");
            return f == std::string::npos ? std::string() : s.substr(f, l - f + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

} // namespace ratpencil::io
