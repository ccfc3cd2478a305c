#include "support/fixtures.hpp"

#include <ratpencil/backward_error.hpp>
#include <ratpencil/eigensolver.hpp>
#include <ratpencil/experiment.hpp>
#include <ratpencil/io.hpp>
#include <ratpencil/pencil_core.hpp>
#include <ratpencil/scaling.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ratpencil;

TEST(CounterRng, Deterministic) {
    CounterRng a(42, {1, 2, 3});
    CounterRng b(42, {1, 2, 3});
    CounterRng c(42, {1, 2, 4});
    for (int i = 0; i < 10; ++i) {
        const auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        EXPECT_NE(x, c.next_u64());
    }
}

TEST(CounterRng, UniformRangeAndNormalMoments) {
    CounterRng rng(1, {0});
    double sum = 0.0, sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        EXPECT_GT(u, 0.0);
        EXPECT_LE(u, 1.0);
    }
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sq += z * z;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.05);
    EXPECT_NEAR(sq / n, 1.0, 0.05);
}

TEST(RandomQuadruple, AddressedByKey) {
    const DrawKey k{5, 1, 3, 7, 0};
    const RationalQuadruple a = random_quadruple(k, 2, 2, 5, 3);
    const RationalQuadruple b = random_quadruple(k, 2, 2, 5, 3);
    EXPECT_EQ(a.A, b.A);
    EXPECT_EQ(a.D.coeffs[3], b.D.coeffs[3]);
    DrawKey k2 = k;
    k2.resample = 1;
    EXPECT_NE(random_quadruple(k2, 2, 2, 5, 3).A, a.A);
}

TEST(ApplyProfile, Multipliers) {
    const RationalQuadruple q = base_quadruple(DrawKey{1, 0, 1, 0, 0}, 2, 2, 5, 3);
    const RationalQuadruple p1 = apply_profile(q, 1, 2);
    EXPECT_LE((p1.A - 100.0 * q.A).norm(), 1e-13 * p1.A.norm());
    EXPECT_EQ(p1.B, q.B);
    const RationalQuadruple p2 = apply_profile(q, 2, 6);
    EXPECT_LE((p2.B - 1e3 * q.B).norm(), 1e-12 * p2.B.norm());
    EXPECT_LE((p2.C - 1e2 * q.C).norm(), 1e-12 * p2.C.norm());
    EXPECT_LE((p2.D.coeffs[1] - 1e6 * q.D.coeffs[1]).norm(), 1e-12 * p2.D.coeffs[1].norm());
    EXPECT_EQ(p2.D.coeffs[0], q.D.coeffs[0]);
    EXPECT_EQ(p2.A, q.A);
    const RationalQuadruple p3 = apply_profile(q, 3, 6);
    EXPECT_LE((p3.A - 1e6 * q.A).norm(), 1e-12 * p3.A.norm());
    EXPECT_LE((p3.B - 1e3 * q.B).norm(), 1e-12 * p3.B.norm());
}

TEST(RandomPerturbation, RelativeNorm) {
    CounterRng rng(3, {1});
    const Pencil s = fixtures::random_pencil(rng, 4, 4);
    const Pencil d = random_perturbation(s, 1e-8, rng);
    EXPECT_NEAR(norm(d), 1e-8 * norm(s), 1e-22);
}

TEST(ExperimentConfig, Validation) {
    ExperimentConfig c;
    EXPECT_NO_THROW(c.validate());
    c.d = 4;
    EXPECT_THROW(c.validate(), Error);
    c = ExperimentConfig{};
    c.n = 3;
    EXPECT_THROW(c.validate(), Error);
}

TEST(Experiment, SmallRunIsReproducible) {
    ExperimentConfig c;
    c.batches = 2;
    c.runs_per_batch = 3;
    const ExperimentResult a = run_experiment(c);
    const ExperimentResult b = run_experiment(c);
    ASSERT_EQ(a.rows.size(), 2u);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].mean_r_unscaled, b.rows[i].mean_r_unscaled);
        EXPECT_EQ(a.rows[i].mean_r_scaled, b.rows[i].mean_r_scaled);
        EXPECT_LE(a.rows[i].mean_r_scaled, 1e3 * kEpsM);
    }
}

TEST(Emit, CsvRoundTripAndSvgLines) {
    std::vector<ExperimentRow> rows = {{1, 1e-13, 2e-16, 3e-15}, {2, 1e-11, 4e-16, 5e-14}};
    std::stringstream csv;
    emit(csv, rows, EmitFormat::csv);
    const auto back = read_experiment_csv(csv);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[1].i, 2);
    EXPECT_EQ(back[1].mean_r_unscaled, 1e-11);
    EXPECT_EQ(back[0].mean_epsM_normR, 3e-15);
    std::stringstream svg;
    emit(svg, rows, EmitFormat::svg, "trend");
    const std::string text = svg.str();
    std::size_t count = 0;
    for (std::size_t pos = text.find("<polyline"); pos != std::string::npos; pos = text.find("<polyline", pos + 1)) {
        ++count;
    }
    EXPECT_EQ(count, 3u);
}

TEST(Emit, AllFormatsWritten) {
    const auto dir = std::filesystem::temp_directory_path() / "ratpencil_emit_test";
    std::filesystem::remove_all(dir);
    const auto paths = emit_all({{1, 1.0, 2.0, 3.0}}, dir, "p1");
    ASSERT_EQ(paths.size(), 3u);
    for (const auto& p : paths) EXPECT_TRUE(std::filesystem::exists(p));
    std::filesystem::remove_all(dir);
}

TEST(Io, QuadrupleRoundTripIsExact) {
    const RationalQuadruple q = fixtures::random_quad(9, 2, 3, 4, 2);
    std::stringstream s;
    io::write_quadruple(s, q);
    const RationalQuadruple r = io::read_quadruple(s);
    EXPECT_EQ(r.A, q.A);
    EXPECT_EQ(r.B, q.B);
    EXPECT_EQ(r.C, q.C);
    ASSERT_EQ(r.D.coeffs.size(), q.D.coeffs.size());
    for (std::size_t k = 0; k < q.D.coeffs.size(); ++k) EXPECT_EQ(r.D.coeffs[k], q.D.coeffs[k]);
}

TEST(Io, ComplexPencilRoundTrip) {
    CounterRng rng(1, {1});
    const Pencil p(fixtures::random_complex(rng, 2, 3), fixtures::random_complex(rng, 2, 3));
    std::stringstream s;
    io::write_pencil(s, p);
    const Pencil r = io::read_pencil(s);
    EXPECT_EQ(r.p0, p.p0);
    EXPECT_EQ(r.p1, p.p1);
}

TEST(Io, FileHelpers) {
    const auto path = std::filesystem::temp_directory_path() / "ratpencil_quad_test.txt";
    const RationalQuadruple q = fixtures::random_quad(10, 1, 1, 2, 1);
    io::save_quadruple(path, q);
    EXPECT_TRUE(io::is_quadruple_file(path));
    EXPECT_EQ(io::load_quadruple(path).A, q.A);
    std::filesystem::remove(path);
    EXPECT_THROW(io::load_quadruple(path), IoError);
}

TEST(Io, MalformedInputRejected) {
    std::stringstream s("QUAD\nnot numbers\n");
    EXPECT_THROW(io::read_quadruple(s), IoError);
}

TEST(Io, EigenvalueCsvRoundTrip) {
    const RationalQuadruple q = fixtures::random_quad(11, 2, 2, 3, 3);
    const GeneralizedEigenvalues ev = zeros(q, 1, 1);
    std::stringstream s;
    io::write_eigenvalues_csv(s, ev);
    const auto back = io::read_eigenvalues_csv(s);
    EXPECT_EQ(match_eigenvalues(back, ev.finite()), 0.0);
}

TEST(Io, ScalingRoundTrip) {
    const auto [qh, sr] = scale_quadruple(fixtures::random_quad(12, 2, 2, 3, 2), true);
    std::stringstream s;
    io::write_scaling(s, sr);
    const ScalingResult r = io::read_scaling(s);
    EXPECT_EQ(r.d_lambda, sr.d_lambda);
    EXPECT_EQ(r.d_R, sr.d_R);
    EXPECT_EQ(r.T_diag, sr.T_diag);
    EXPECT_EQ(r.pow2, sr.pow2);
}

TEST(Io, KeyValues) {
    std::stringstream s("# comment\nprofile = 2\nseed=7\n\n");
    const auto kv = io::read_key_values(s);
    EXPECT_EQ(kv.at("profile"), "2");
    EXPECT_EQ(kv.at("seed"), "7");
}

TEST(Io, FormatDoubleRoundTrips) {
    const double x = 0.1 + 0.2;
    EXPECT_EQ(std::stod(io::format_double(x)), x);
}
