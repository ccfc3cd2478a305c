#pragma once

#include <ratpencil/experiment.hpp>
#include <ratpencil/types.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace fixtures {

inline ratpencil::RationalQuadruple random_quad(std::uint64_t seed, ratpencil::Index m, ratpencil::Index n,
                                                ratpencil::Index ell, int d, int run = 0) {
    return ratpencil::random_quadruple(ratpencil::DrawKey{seed, 0, 1, run, 0}, m, n, ell, d);
}

inline ratpencil::Matrix random_matrix(ratpencil::CounterRng& rng, ratpencil::Index r, ratpencil::Index c) {
    return ratpencil::normal_matrix(rng, r, c);
}

inline ratpencil::Matrix random_complex(ratpencil::CounterRng& rng, ratpencil::Index r, ratpencil::Index c) {
    ratpencil::Matrix a(r, c);
    for (ratpencil::Index j = 0; j < c; ++j)
        for (ratpencil::Index i = 0; i < r; ++i) a(i, j) = ratpencil::Complex(rng.normal(), rng.normal());
    return a;
}

inline ratpencil::Pencil random_pencil(ratpencil::CounterRng& rng, ratpencil::Index r, ratpencil::Index c) {
    return ratpencil::Pencil(random_matrix(rng, r, c), random_matrix(rng, r, c));
}

inline std::vector<Eigen::MatrixXd> real_coeffs(const ratpencil::PolyMatrix& p) {
    std::vector<Eigen::MatrixXd> out;
    for (const auto& c : p.coeffs) out.push_back(c.real());
    return out;
}

} // namespace fixtures
