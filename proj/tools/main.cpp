// ratpencil command-line front end.

#include <ratpencil/backward_error.hpp>
#include <ratpencil/eigensolver.hpp>
#include <ratpencil/experiment.hpp>
#include <ratpencil/io.hpp>
#include <ratpencil/linalg.hpp>
#include <ratpencil/linearization.hpp>
#include <ratpencil/pencil_core.hpp>
#include <ratpencil/restoration.hpp>
#include <ratpencil/scaling.hpp>
#include <ratpencil/sylvester.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace rp = ratpencil;
namespace fs = std::filesystem;

namespace {

struct Split {
    rp::Index eps = 0;
    rp::Index eta = 0;
    bool linear = false;
};

// Explicit --eps/--eta win; otherwise split d−1 as evenly as possible.
Split choose_split(const rp::RationalQuadruple& q, std::optional<rp::Index> eps, std::optional<rp::Index> eta) {
    const int d = q.degree();
    Split s;
    if (eps || eta) {
        s.eps = eps.value_or(std::max<rp::Index>(0, d - 1 - eta.value_or(0)));
        s.eta = eta.value_or(std::max<rp::Index>(0, d - 1 - s.eps));
    } else if (d > 1) {
        s.eps = (d - 1) / 2;
        s.eta = d - 1 - s.eps;
    }
    s.linear = s.eps == 0 && s.eta == 0 && d <= 1;
    return s;
}

rp::BlockKroneckerPencil linearize(const rp::RationalQuadruple& q, const Split& s) {
    return s.linear ? rp::build_linear_S(q) : rp::build_S(q, s.eps, s.eta);
}

// Writes to the file if given, else to stdout.
template <class F>
void with_output(const std::string& path, F&& write) {
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw rp::IoError("cannot write " + path);
    write(out);
    if (!out) throw rp::IoError("write failed: " + path);
}

void print_kv(std::ostream& out, const std::string& k, double v) { out << k << ',' << rp::io::format_double(v) << '\n'; }

void print_bounds(std::ostream& out, const rp::BoundReport& b) {
    out << "quantity,value\n";
    print_kv(out, "alpha", b.alpha);
    print_kv(out, "beta", b.beta);
    print_kv(out, "gamma", b.gamma);
    print_kv(out, "s", b.s);
    print_kv(out, "f1", b.f1);
    print_kv(out, "f2", b.f2);
    print_kv(out, "f3", b.f3);
    print_kv(out, "sigma_min_T", b.sigma_minT);
    print_kv(out, "norm_S_fro", b.norm_S_fro);
    print_kv(out, "norm_S_2", b.norm_S_2);
    print_kv(out, "norm_R", b.norm_R);
    print_kv(out, "K_SR", b.K_SR);
    print_kv(out, "t", static_cast<double>(b.t));
    print_kv(out, "q", b.q);
    print_kv(out, "g", b.g);
    print_kv(out, "smallness_threshold", b.smallness_threshold);
    print_kv(out, "step1_bound_factor", b.step1_bound / b.delta_norm);
}

// Flat key=value config: each key names a long option of the selected
// subcommand. Values are injected as if typed, ahead of the real arguments,
// so explicit flags still win.
std::vector<std::string> config_arguments(const CLI::App* sub, const std::map<std::string, std::string>& kv) {
    std::vector<std::string> extra;
    for (const auto& [key, value] : kv) {
        const CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr) throw rp::IoError("config key '" + key + "' is not an option of " + sub->get_name());
        if (opt->count() > 0) continue;
        if (opt->get_type_size() == 0) {
            if (value == "true" || value == "1" || value == "yes") extra.push_back("--" + key);
        } else {
            extra.push_back("--" + key);
            extra.push_back(value);
        }
    }
    return extra;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rational matrices through block Kronecker linearizations"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "key=value file providing defaults for the subcommand's options");

    // linearize
    auto* lin = app.add_subcommand("linearize", "Write the block Kronecker pencil of a quadruple");
    std::string lin_in, lin_out;
    std::optional<rp::Index> lin_eps, lin_eta;
    lin->add_option("quad-file", lin_in)->required()->check(CLI::ExistingFile);
    lin->add_option("--eps", lin_eps);
    lin->add_option("--eta", lin_eta);
    lin->add_option("-o,--output", lin_out, "pencil file (stdout if omitted)");

    // eig
    auto* eig = app.add_subcommand("eig", "Generalized eigenvalues of a pencil file, or zeros of a quadruple file");
    std::string eig_in, eig_out;
    std::optional<rp::Index> eig_eps, eig_eta;
    eig->add_option("file", eig_in)->required()->check(CLI::ExistingFile);
    eig->add_option("--eps", eig_eps);
    eig->add_option("--eta", eig_eta);
    eig->add_option("-o,--output", eig_out);

    // scale
    auto* scale = app.add_subcommand("scale", "Scale a quadruple to unit norms");
    std::string scale_in, scale_out;
    bool no_pow2 = false;
    scale->add_option("quad-file", scale_in)->required()->check(CLI::ExistingFile);
    scale->add_flag("--no-pow2", no_pow2, "use exact factors instead of powers of two");
    scale->add_option("-o,--output", scale_out, "file for the scaled quadruple");

    // restore-demo
    auto* demo = app.add_subcommand("restore-demo", "Perturb the linearization, restore its structure, report");
    std::string demo_in, demo_out, demo_report;
    double demo_delta = 1e-8;
    std::uint64_t demo_seed = 1;
    std::optional<rp::Index> demo_eps, demo_eta;
    demo->add_option("quad-file", demo_in)->required()->check(CLI::ExistingFile);
    demo->add_option("--delta", demo_delta, "relative Frobenius size of the perturbation")
        ->check(CLI::PositiveNumber);
    demo->add_option("--seed", demo_seed)->envname("RATPENCIL_SEED");
    demo->add_option("--eps", demo_eps);
    demo->add_option("--eta", demo_eta);
    demo->add_option("-o,--output", demo_out, "file for the restored quadruple");
    demo->add_option("--report", demo_report, "report CSV (stdout if omitted)");

    // bounds
    auto* bnd = app.add_subcommand("bounds", "Constants of the structured backward error bounds");
    std::string bnd_in;
    std::optional<rp::Index> bnd_eps, bnd_eta;
    bnd->add_option("quad-file", bnd_in)->required()->check(CLI::ExistingFile);
    bnd->add_option("--eps", bnd_eps);
    bnd->add_option("--eta", bnd_eta);

    // backward-error
    auto* be = app.add_subcommand("backward-error", "Backward error estimate at the zeros of a quadruple");
    std::string be_in, be_eigs, be_out;
    std::optional<rp::Index> be_eps, be_eta;
    be->add_option("quad-file", be_in)->required()->check(CLI::ExistingFile);
    be->add_option("--eigenvalues", be_eigs, "CSV of eigenvalues (computed by QZ if omitted)")
        ->check(CLI::ExistingFile);
    be->add_option("--eps", be_eps);
    be->add_option("--eta", be_eta);
    be->add_option("-o,--output", be_out);

    // verify-lemmas
    auto* vl = app.add_subcommand("verify-lemmas", "Smallest singular values of the Sylvester operators vs their bounds");
    rp::Index vl_max_k = 4;
    int vl_samples = 5;
    std::uint64_t vl_seed = 1;
    vl->add_option("--max-k", vl_max_k)->check(CLI::Range(1, 12));
    vl->add_option("--samples", vl_samples, "random A per (eps, eta, norm)")->check(CLI::PositiveNumber);
    vl->add_option("--seed", vl_seed)->envname("RATPENCIL_SEED");

    // experiment
    auto* ex = app.add_subcommand("experiment", "Batch backward error experiment, unscaled vs scaled");
    rp::ExperimentConfig cfg;
    bool ex_unscaled_only = false;
    std::string ex_out = "out";
    ex->add_option("--profile", cfg.profile)->check(CLI::IsMember({1, 2, 3}));
    ex->add_option("--batches", cfg.batches)->check(CLI::PositiveNumber);
    ex->add_option("--runs", cfg.runs_per_batch)->check(CLI::PositiveNumber);
    ex->add_option("--seed", cfg.seed)->envname("RATPENCIL_SEED");
    ex->add_option("--m", cfg.m);
    ex->add_option("--n", cfg.n);
    ex->add_option("--l", cfg.ell);
    ex->add_option("--d", cfg.d);
    ex->add_option("--eps", cfg.eps);
    ex->add_option("--eta", cfg.eta);
    ex->add_flag("--unscaled-only", ex_unscaled_only);
    ex->add_option("-o,--output", ex_out, "output directory");

    try {
        app.parse(argc, argv);
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw rp::IoError("cannot open config " + config_path);
            const auto kv = rp::io::read_key_values(in);
            CLI::App* sub = app.get_subcommands().front();
            std::vector<std::string> args(argv + 1, argv + argc);
            const std::vector<std::string> extra = config_arguments(sub, kv);
            const auto pos = std::find(args.begin(), args.end(), sub->get_name());
            args.insert(pos + 1, extra.begin(), extra.end());
            std::reverse(args.begin(), args.end());
            app.clear();
            app.parse(args);
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const rp::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*lin) {
            const rp::RationalQuadruple q = rp::io::load_quadruple(lin_in);
            const rp::BlockKroneckerPencil S = linearize(q, choose_split(q, lin_eps, lin_eta));
            with_output(lin_out, [&](std::ostream& o) { rp::io::write_pencil(o, S.S); });
        } else if (*eig) {
            rp::GeneralizedEigenvalues ev;
            if (rp::io::is_quadruple_file(eig_in)) {
                const rp::RationalQuadruple q = rp::io::load_quadruple(eig_in);
                ev = rp::qz(linearize(q, choose_split(q, eig_eps, eig_eta)).S);
            } else {
                ev = rp::qz(rp::io::load_pencil(eig_in));
            }
            for (const std::string& w : ev.warnings) std::cerr << "warning: " << w << '\n';
            with_output(eig_out, [&](std::ostream& o) { rp::io::write_eigenvalues_csv(o, ev); });
        } else if (*scale) {
            const rp::RationalQuadruple q = rp::io::load_quadruple(scale_in);
            const auto [q_hat, sr] = rp::scale_quadruple(q, !no_pow2);
            rp::io::write_scaling(std::cout, sr);
            if (!scale_out.empty()) rp::io::save_quadruple(scale_out, q_hat);
        } else if (*demo) {
            const rp::RationalQuadruple q = rp::io::load_quadruple(demo_in);
            const Split sp = choose_split(q, demo_eps, demo_eta);
            const rp::BlockKroneckerPencil S = linearize(q, sp);
            rp::CounterRng rng(demo_seed, {0xde1aULL});
            const rp::Pencil s_hat = S.S + rp::random_perturbation(S.S, demo_delta, rng);
            const rp::RestorationResult r = sp.linear ? rp::restore_linear(s_hat, q.m(), q.n(), q.ell(), q)
                                                      : rp::restore(s_hat, S.layout, q);
            with_output(demo_report, [&](std::ostream& o) { rp::io::write_restoration_report(o, r); });
            if (!demo_out.empty()) rp::io::save_quadruple(demo_out, r.quadruple);
        } else if (*bnd) {
            const rp::RationalQuadruple q = rp::io::load_quadruple(bnd_in);
            const Split sp = choose_split(q, bnd_eps, bnd_eta);
            if (sp.linear || sp.eps + sp.eta == 0) throw rp::ArgumentError("bounds need max(eps, eta) >= 1");
            const rp::BlockKroneckerPencil S = rp::build_S(q, sp.eps, sp.eta);
            rp::BoundReport b = rp::bound_constants(q, S, 1.0);
            print_bounds(std::cout, b);
        } else if (*be) {
            const rp::RationalQuadruple q = rp::io::load_quadruple(be_in);
            std::vector<rp::Complex> lams;
            if (!be_eigs.empty()) {
                std::ifstream in(be_eigs);
                lams = rp::io::read_eigenvalues_csv(in);
            } else {
                const rp::GeneralizedEigenvalues ev = rp::qz(linearize(q, choose_split(q, be_eps, be_eta)).S);
                for (const std::string& w : ev.warnings) std::cerr << "warning: " << w << '\n';
                lams = ev.finite();
            }
            const rp::GlobalBackwardError r = rp::global_r(q, lams);
            for (const std::string& w : r.warnings) std::cerr << "warning: " << w << '\n';
            with_output(be_out, [&](std::ostream& o) { rp::io::write_backward_error_csv(o, r); });
        } else if (*vl) {
            std::cout << "which,eps,eta,k,normA,omega,lower_bound,exact,holds\n";
            auto row = [](const rp::OmegaReport& r) {
                std::cout << r.which << ',' << r.params.eps << ',' << r.params.eta << ',' << r.params.k << ','
                          << rp::io::format_double(r.normA) << ',' << rp::io::format_double(r.omega) << ','
                          << rp::io::format_double(r.lower_bound) << ','
                          << (r.exact ? rp::io::format_double(*r.exact) : std::string()) << ','
                          << (r.holds() ? 1 : 0) << '\n';
            };
            bool all = true;
            for (rp::Index e = 1; e <= vl_max_k; ++e) {
                for (rp::Index h = 1; h <= vl_max_k; ++h) {
                    rp::OmegaParams p;
                    p.eps = e;
                    p.eta = h;
                    const rp::OmegaReport r3 = rp::omega(3, p);
                    all = all && r3.holds();
                    row(r3);
                }
            }
            for (rp::Index k = 1; k <= vl_max_k; ++k) {
                rp::OmegaParams p;
                p.k = k;
                const rp::OmegaReport r4 = rp::omega(4, p);
                all = all && r4.holds();
                row(r4);
            }
            for (rp::Index k = 1; k <= vl_max_k; ++k) {
                for (const double target : {0.5, 1.0, 2.0}) {
                    for (int s = 0; s < vl_samples; ++s) {
                        rp::CounterRng rng(vl_seed, {static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(s),
                                                     static_cast<std::uint64_t>(target * 4)});
                        rp::Matrix A = rp::normal_matrix(rng, 3, 3);
                        A *= target / rp::spectral_norm(A);
                        rp::OmegaParams p;
                        p.eps = k;
                        p.eta = k;
                        p.A = A;
                        for (int which : {1, 2}) {
                            const rp::OmegaReport r = rp::omega(which, p);
                            all = all && r.holds();
                            row(r);
                        }
                    }
                }
            }
            if (!all) {
                std::cerr << "some lower bounds were violated\n";
                return 1;
            }
        } else if (*ex) {
            cfg.scaled = !ex_unscaled_only;
            cfg.output_dir = ex_out;
            const rp::ExperimentResult res = rp::run_experiment(cfg);
            for (const std::string& line : res.log) std::cerr << line << '\n';
            if (res.resamples > 0) std::cerr << res.resamples << " resamples\n";
            const std::string stem = "profile" + std::to_string(cfg.profile);
            rp::emit_all(res.rows, cfg.output_dir, stem, "profile " + std::to_string(cfg.profile));
            rp::emit(std::cout, res.rows, rp::EmitFormat::csv);
        }
    } catch (const rp::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
