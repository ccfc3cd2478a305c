#pragma once

#include "ratpencil/linearization.hpp"
#include "ratpencil/types.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ratpencil {

/// One strict equivalence Ŝ_k = (I − X)·Ŝ_{k−1}·(I − Y).
struct RestorationStep {
    Matrix X;
    Matrix Y;
    double xy_norm = 0.0;
    /// ‖Ŝ_k − Ŝ_{k−1}‖_F.
    double step_delta_norm = 0.0;
    /// ‖Ŝ_k − S‖_F, known only when the unperturbed quadruple is given.
    std::optional<double> cumulative_delta_norm;
    /// Largest deviation of the blocks that were snapped to their exact form.
    double snap_residual = 0.0;
    int iterations = 0;
    /// Upper bound for xy_norm predicted from the unperturbed data, if any.
    std::optional<double> bound;
};

struct BoundReport {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double s = 0.0;
    double f1 = 0.0;
    double f2 = 0.0;
    double f3 = 0.0;
    double sigma_minT = 0.0;
    double deltaT_norm = 0.0;
    double sigma = 0.0;
    double theta = 0.0;
    double omega_cap = 0.0;
    double K_SR = 0.0;
    Index t = 0;
    double q = 0.0;
    /// K_SR / (t^q·√(m+n)).
    double g = 0.0;
    double delta = 0.0;
    double delta_norm = 0.0;
    double norm_S_fro = 0.0;
    double norm_S_2 = 0.0;
    double norm_R = 0.0;
    /// ‖Δ_S‖_F must stay below this for the first-step bound to be guaranteed.
    double smallness_threshold = 0.0;
    bool smallness_holds = false;
    /// σ > 0 and θω/σ² < 1/4.
    bool contraction_holds = false;
    /// 4s‖Δ_S‖_F/(2−√3).
    double step1_bound = 0.0;

    bool certified() const { return smallness_holds && contraction_holds; }
};

struct RestorationResult {
    std::vector<RestorationStep> steps;
    BlockKroneckerPencil restored;
    RationalQuadruple quadruple;
    Matrix total_X;
    Matrix total_Y;
    std::optional<BoundReport> bounds;
    /// ‖(Ã−A, B̃−B, C̃−C, D̃−D)‖_F / ‖R‖_F when the unperturbed quadruple is known.
    std::optional<double> backward_error_lhs;
    /// ‖D̃−D‖_F and ‖M̃−M‖_F, for the same case.
    std::optional<double> d_change;
    std::optional<double> m_change;
    /// (1+√2‖S‖₂)², the growth factor of the linear-part restoration.
    std::optional<double> linear_bound_factor;
    std::optional<double> linear_change;
    /// ‖(I−total_X)·Ŝ·(I−total_Y) − restored.S‖_F.
    double equivalence_residual = 0.0;
    double eigenvalue_mismatch = 0.0;
    std::vector<std::string> warnings;
};

struct Step1Options {
    int max_iter = 50;
};

/// The coefficient matrix of the linearized anti-triangularization system,
/// assembled from the blocks of a pencil on the given grid. Unknowns are
/// ordered X21, Y23, X32, Y12, X31, Y13; equations (2,3), (3,2), (3,3), each
/// split into its constant and λ part.
Matrix step1_matrix(const Pencil& s, const BlockLayout& layout);

/// Zeroes blocks (2,3), (3,2), (3,3) by fixed-point iteration on the
/// quadratic system, each iterate a minimum-norm solve with the quadratic
/// terms taken from the previous iterate.
std::pair<RestorationStep, Pencil> step1_antitriangularize(const Pencil& s_hat, const BlockLayout& layout,
                                                           const Step1Options& opts = {});

/// Block-diagonal equivalence restoring L_ε⊗I_n, L_ηᵀ⊗I_m and the identity
/// in A − λI.
std::pair<RestorationStep, Pencil> step2_restore_kronecker(const Pencil& s1, const BlockLayout& layout);

/// Block-triangular equivalence making the (1,2) and (2,1) blocks constant
/// and supported on their last block row / column.
std::pair<RestorationStep, Pencil> step3_restore_BC(const Pencil& s2, const BlockLayout& layout);

RestorationResult restore(const Pencil& s_hat, const BlockLayout& layout,
                          const std::optional<RationalQuadruple>& nominal = std::nullopt);

/// Restoration of [[M(λ), C],[B, A−λI]] for degree(D) ≤ 1.
RestorationResult restore_linear(const Pencil& s_hat, Index m, Index n, Index ell,
                                 const std::optional<RationalQuadruple>& nominal = std::nullopt);

BoundReport bound_constants(const RationalQuadruple& q, const BlockKroneckerPencil& S, double delta_norm);

/// Fills the perturbation dependent entries (‖ΔT‖₂, σ, θ, ω) of a report.
void add_perturbation_terms(BoundReport& rep, const BlockKroneckerPencil& S, const Pencil& delta);

} // namespace ratpencil
