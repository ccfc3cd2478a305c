#include "ratpencil/experiment.hpp"

#include "ratpencil/backward_error.hpp"
#include "ratpencil/eigensolver.hpp"
#include "ratpencil/io.hpp"
#include "ratpencil/linearization.hpp"
#include "ratpencil/pencil_core.hpp"
#include "ratpencil/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace ratpencil {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

struct RunOutcome {
    double r_unscaled = 0.0;
    double r_scaled = 0.0;
    double eps_norm = 0.0;
};

BlockKroneckerPencil linearize(const RationalQuadruple& q, const ExperimentConfig& cfg) {
    if (cfg.eps == 0 && cfg.eta == 0) return build_linear_S(q);
    return build_S(q, cfg.eps, cfg.eta);
}

} // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::initializer_list<std::uint64_t> key) {
    std::uint64_t h = splitmix64(seed ^ static_cast<std::uint64_t>(kRngVersion));
    for (std::uint64_t k : key) h = splitmix64(h ^ splitmix64(k));
    base_ = h;
}

std::uint64_t CounterRng::next_u64() { return splitmix64(base_ + kGolden * ++counter_); }

double CounterRng::uniform() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

double CounterRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = rad * std::sin(ang);
    has_spare_ = true;
    return rad * std::cos(ang);
}

Matrix normal_matrix(CounterRng& rng, Index rows, Index cols) {
    Matrix a(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) a(i, j) = Complex(rng.normal(), 0.0);
    }
    return a;
}

Pencil random_perturbation(const Pencil& s, double relative, CounterRng& rng) {
    Matrix e0 = normal_matrix(rng, s.rows(), s.cols());
    Matrix e1 = normal_matrix(rng, s.rows(), s.cols());
    Pencil e(std::move(e0), std::move(e1));
    const double ne = norm(e);
    if (ne == 0.0) return e;
    return Complex(relative * norm(s) / ne, 0.0) * e;
}

RationalQuadruple base_quadruple(const DrawKey& key, Index m, Index n, Index ell, int d) {
    if (m < 1 || n < 1 || ell < 1 || d < 0) throw ArgumentError("random quadruple needs m, n, l >= 1 and d >= 0");
    CounterRng rng(key.seed, {static_cast<std::uint64_t>(key.profile), static_cast<std::uint64_t>(key.batch),
                              static_cast<std::uint64_t>(key.run), static_cast<std::uint64_t>(key.resample)});
    Matrix A = normal_matrix(rng, ell, ell);
    Matrix B = normal_matrix(rng, ell, n);
    Matrix C = normal_matrix(rng, m, ell);
    std::vector<Matrix> D;
    for (int k = 0; k <= d; ++k) D.push_back(normal_matrix(rng, m, n));
    return RationalQuadruple(std::move(A), std::move(B), std::move(C), PolyMatrix(std::move(D)));
}

RationalQuadruple apply_profile(RationalQuadruple q, int profile, int i) {
    if (profile < 0 || profile > 3) throw ArgumentError("profile must be 0, 1, 2 or 3");
    const double x = static_cast<double>(i);
    if (profile == 1 || profile == 3) q.A *= std::pow(10.0, x);
    if (profile == 2 || profile == 3) {
        q.B *= std::pow(10.0, x / 2.0);
        q.C *= std::pow(10.0, x / 3.0);
        const double mult[] = {std::pow(10.0, x), std::pow(10.0, x / 2.0), std::pow(10.0, x / 3.0)};
        for (int k = 1; k <= 3 && k <= q.degree(); ++k) q.D.coeffs[static_cast<std::size_t>(k)] *= mult[k - 1];
    }
    return q;
}

RationalQuadruple random_quadruple(const DrawKey& key, Index m, Index n, Index ell, int d) {
    return apply_profile(base_quadruple(key, m, n, ell, d), key.profile, key.batch);
}

void ExperimentConfig::validate() const {
    if (profile < 1 || profile > 3) throw ArgumentError("profile must be 1, 2 or 3");
    if (batches < 1 || runs_per_batch < 1) throw ArgumentError("batches and runs must be positive");
    if (m < 1 || n < 1 || ell < 1) throw ArgumentError("m, n and l must be positive");
    if (m != n) throw ArgumentError("zeros need a square rational matrix (m = n)");
    if (eps < 0 || eta < 0) throw ArgumentError("eps and eta must be nonnegative");
    const bool linear = eps == 0 && eta == 0 && d <= 1;
    if (!linear && d != eps + eta + 1) throw ArgumentError("d must equal eps + eta + 1");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    constexpr int kMaxResamples = 5;
    ExperimentResult res;
    for (int i = 1; i <= cfg.batches; ++i) {
        ExperimentRow row;
        row.i = i;
        for (int run = 0; run < cfg.runs_per_batch; ++run) {
            RunOutcome out;
            bool done = false;
            for (int resample = 0; resample <= kMaxResamples && !done; ++resample) {
                const DrawKey key{cfg.seed, cfg.profile, i, run, resample};
                const RationalQuadruple q = random_quadruple(key, cfg.m, cfg.n, cfg.ell, cfg.d);
                const GeneralizedEigenvalues ev = qz(linearize(q, cfg).S);
                if (!ev.regular()) {
                    ++res.resamples;
                    res.log.push_back("batch " + std::to_string(i) + " run " + std::to_string(run) +
                                      ": resampled after QZ warning");
                    continue;
                }
                out.r_unscaled = global_r(q, ev.finite()).r;
                out.eps_norm = kEpsM * norm(q);
                if (cfg.scaled) {
                    const auto [q_hat, sr] = scale_quadruple(q, true);
                    const GeneralizedEigenvalues ev_hat = qz(linearize(q_hat, cfg).S);
                    if (!ev_hat.regular()) {
                        ++res.resamples;
                        res.log.push_back("batch " + std::to_string(i) + " run " + std::to_string(run) +
                                          ": resampled after QZ warning on the scaled pencil");
                        continue;
                    }
                    out.r_scaled = global_r(q_hat, ev_hat.finite()).r;
                }
                done = true;
            }
            if (!done) {
                throw DegeneracyError("batch " + std::to_string(i) + " run " + std::to_string(run) +
                                      ": no regular instance after " + std::to_string(kMaxResamples) + " resamples");
            }
            row.mean_r_unscaled += out.r_unscaled;
            row.mean_r_scaled += out.r_scaled;
            row.mean_epsM_normR += out.eps_norm;
        }
        const double runs = static_cast<double>(cfg.runs_per_batch);
        row.mean_r_unscaled /= runs;
        row.mean_r_scaled /= runs;
        row.mean_epsM_normR /= runs;
        res.rows.push_back(row);
    }
    return res;
}

namespace {

void emit_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
    out << "i,mean_r_unscaled,mean_r_scaled,mean_epsM_normR\n";
    for (const ExperimentRow& r : rows) {
        out << r.i << ',' << io::format_double(r.mean_r_unscaled) << ',' << io::format_double(r.mean_r_scaled) << ','
            << io::format_double(r.mean_epsM_normR) << '\n';
    }
}

double safe_log10(double x) { return x > 0.0 ? std::log10(x) : -std::numeric_limits<double>::infinity(); }

void emit_plotdata(std::ostream& out, const std::vector<ExperimentRow>& rows) {
    out << "# i log10_mean_r_unscaled log10_mean_r_scaled log10_mean_epsM_normR\n";
    for (const ExperimentRow& r : rows) {
        out << r.i << ' ' << io::format_double(safe_log10(r.mean_r_unscaled)) << ' '
            << io::format_double(safe_log10(r.mean_r_scaled)) << ' '
            << io::format_double(safe_log10(r.mean_epsM_normR)) << '\n';
    }
}

void emit_svg(std::ostream& out, const std::vector<ExperimentRow>& rows, const std::string& title) {
    constexpr double W = 640, H = 420, left = 70, right = 170, top = 40, bottom = 50;
    const double pw = W - left - right, ph = H - top - bottom;
    struct Series {
        const char* name;
        const char* color;
        double ExperimentRow::*field;
    };
    const Series series[] = {{"unscaled", "#c0392b", &ExperimentRow::mean_r_unscaled},
                             {"scaled", "#2471a3", &ExperimentRow::mean_r_scaled},
                             {"eps_M*||R||", "#229954", &ExperimentRow::mean_epsM_normR}};
    double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
    int imin = rows.front().i, imax = rows.front().i;
    for (const ExperimentRow& r : rows) {
        imin = std::min(imin, r.i);
        imax = std::max(imax, r.i);
        for (const Series& s : series) {
            const double y = safe_log10(r.*s.field);
            if (std::isfinite(y)) {
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        }
    }
    if (!std::isfinite(ymin)) ymin = -17, ymax = 0;
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
    if (ymax <= ymin) ymax = ymin + 1;
    const double xspan = imax > imin ? imax - imin : 1;
    auto px = [&](int i) { return left + pw * (i - imin) / xspan; };
    auto py = [&](double y) { return top + ph * (ymax - y) / (ymax - ymin); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
    out << "<g stroke=\"black\" fill=\"none\"><rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw
        << "\" height=\"" << ph << "\"/></g>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    const int ystep = std::max(1, static_cast<int>((ymax - ymin) / 8));
    for (int y = static_cast<int>(ymin); y <= static_cast<int>(ymax); y += ystep) {
        out << "<text x=\"" << left - 8 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">" << y << "</text>\n";
    }
    for (const ExperimentRow& r : rows) {
        out << "<text x=\"" << px(r.i) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">" << r.i
            << "</text>\n";
    }
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">i</text>\n";
    out << "<text x=\"18\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 18 " << top + ph / 2
        << ")\" text-anchor=\"middle\">log10 mean backward error</text>\n";
    out << "</g>\n";
    int legend = 0;
    for (const Series& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
        bool first = true;
        for (const ExperimentRow& r : rows) {
            const double y = safe_log10(r.*s.field);
            if (!std::isfinite(y)) continue;
            out << (first ? "" : " ") << px(r.i) << ',' << py(y);
            first = false;
        }
        out << "\"/>\n";
        const double ly = top + 20 + 20 * legend++;
        out << "<text x=\"" << left + pw + 30 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << s.color << "\">" << s.name << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace

void emit(std::ostream& out, const std::vector<ExperimentRow>& rows, EmitFormat format, const std::string& title) {
    if (rows.empty()) throw ArgumentError("nothing to emit");
    switch (format) {
    case EmitFormat::csv:
        emit_csv(out, rows);
        break;
    case EmitFormat::plotdata:
        emit_plotdata(out, rows);
        break;
    case EmitFormat::svg:
        emit_svg(out, rows, title);
        break;
    }
}

std::vector<std::filesystem::path> emit_all(const std::vector<ExperimentRow>& rows, const std::filesystem::path& dir,
                                            const std::string& stem, const std::string& title) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> paths;
    const std::pair<const char*, EmitFormat> kinds[] = {
        {".csv", EmitFormat::csv}, {".dat", EmitFormat::plotdata}, {".svg", EmitFormat::svg}};
    for (const auto& [ext, fmt] : kinds) {
        const std::filesystem::path p = dir / (stem + ext);
        std::ofstream out(p);
        if (!out) throw IoError("cannot write " + p.string());
        emit(out, rows, fmt, title);
        if (!out) throw IoError("write failed: " + p.string());
        paths.push_back(p);
    }
    return paths;
}

std::vector<ExperimentRow> read_experiment_csv(std::istream& in) {
    std::vector<ExperimentRow> rows;
    std::string line;
    if (!std::getline(in, line)) return rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 4) throw IoError("experiment CSV row must have 4 fields: " + line);
        ExperimentRow r;
        r.i = std::stoi(cells[0]);
        r.mean_r_unscaled = std::stod(cells[1]);
        r.mean_r_scaled = std::stod(cells[2]);
        r.mean_epsM_normR = std::stod(cells[3]);
        rows.push_back(r);
    }
    return rows;
}

} // namespace ratpencil
