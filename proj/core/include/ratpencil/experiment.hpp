#pragma once

#include "ratpencil/types.hpp"

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

namespace ratpencil {

/// SplitMix64 evaluated at (key hash + counter), so every draw is addressed
/// by its key and position and never depends on earlier draws. Normals come
/// from Box–Muller on pairs of uniforms. Changing any constant here changes
/// every generated instance; kRngVersion records the scheme.
class CounterRng {
  public:
    static constexpr int kRngVersion = 1;

    CounterRng(std::uint64_t seed, std::initializer_list<std::uint64_t> key);

    std::uint64_t next_u64();
    /// Uniform on (0, 1].
    double uniform();
    double normal();

  private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Real standard-normal entries.
Matrix normal_matrix(CounterRng& rng, Index rows, Index cols);

/// Real standard-normal pencil scaled so that ‖Δ‖_F = relative·‖s‖_F.
Pencil random_perturbation(const Pencil& s, double relative, CounterRng& rng);

/// Which instance to draw: a batch index i (1-based), a run within the batch
/// and a resample counter bumped when a draw has to be replaced.
struct DrawKey {
    std::uint64_t seed = 0;
    int profile = 1;
    int batch = 1;
    int run = 0;
    int resample = 0;
};

/// Real standard-normal A, B, C, D₀…D_d.
RationalQuadruple base_quadruple(const DrawKey& key, Index m, Index n, Index ell, int d);

/// Profile 1 multiplies A by 10ⁱ. Profile 2 multiplies B by 10^{i/2}, C by
/// 10^{i/3}, D₁ by 10ⁱ, D₂ by 10^{i/2} and D₃ by 10^{i/3}. Profile 3 does
/// both. Profile 0 leaves the draw alone.
RationalQuadruple apply_profile(RationalQuadruple q, int profile, int i);

RationalQuadruple random_quadruple(const DrawKey& key, Index m, Index n, Index ell, int d);

struct ExperimentConfig {
    int profile = 1;
    int batches = 7;
    int runs_per_batch = 50;
    Index m = 2;
    Index n = 2;
    Index ell = 5;
    int d = 3;
    Index eps = 1;
    Index eta = 1;
    std::uint64_t seed = 20240601;
    bool scaled = true;
    std::filesystem::path output_dir = "out";

    void validate() const;
};

struct ExperimentRow {
    int i = 0;
    double mean_r_unscaled = 0.0;
    double mean_r_scaled = 0.0;
    double mean_epsM_normR = 0.0;
};

struct ExperimentResult {
    std::vector<ExperimentRow> rows;
    int resamples = 0;
    std::vector<std::string> log;
};

/// For every batch and run: draw, estimate the backward error of the QZ
/// zeros of the unscaled linearization, then of the power-of-two scaled one,
/// and average per batch.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

enum class EmitFormat { csv, plotdata, svg };

void emit(std::ostream& out, const std::vector<ExperimentRow>& rows, EmitFormat format, const std::string& title = {});
/// Writes <stem>.csv, <stem>.dat and <stem>.svg into dir and returns their paths.
std::vector<std::filesystem::path> emit_all(const std::vector<ExperimentRow>& rows, const std::filesystem::path& dir,
                                            const std::string& stem, const std::string& title = {});

std::vector<ExperimentRow> read_experiment_csv(std::istream& in);

} // namespace ratpencil
