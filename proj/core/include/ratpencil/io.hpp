#pragma once

#include "ratpencil/backward_error.hpp"
#include "ratpencil/eigensolver.hpp"
#include "ratpencil/restoration.hpp"
#include "ratpencil/scaling.hpp"
#include "ratpencil/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace ratpencil::io {

// Matrix text format: a line `rows cols complex|real`, then the entries row
// by row, complex entries as `re im`.
Matrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const Matrix& a);

Pencil read_pencil(std::istream& in);
void write_pencil(std::ostream& out, const Pencil& p);

PolyMatrix read_polymatrix(std::istream& in);
void write_polymatrix(std::ostream& out, const PolyMatrix& p);

// `QUAD m n l d`, then A, B, C, D₀ … D_d.
RationalQuadruple read_quadruple(std::istream& in);
void write_quadruple(std::ostream& out, const RationalQuadruple& q);

RationalQuadruple load_quadruple(const std::filesystem::path& path);
void save_quadruple(const std::filesystem::path& path, const RationalQuadruple& q);
Pencil load_pencil(const std::filesystem::path& path);
void save_pencil(const std::filesystem::path& path, const Pencil& p);

/// True when the first token of the file is QUAD.
bool is_quadruple_file(const std::filesystem::path& path);

void write_eigenvalues_csv(std::ostream& out, const GeneralizedEigenvalues& ev);
/// Accepts the eigenvalue CSV written above (finite rows only) or plain
/// `re,im` rows. A header line is skipped.
std::vector<Complex> read_eigenvalues_csv(std::istream& in);

void write_backward_error_csv(std::ostream& out, const GlobalBackwardError& r);

void write_scaling(std::ostream& out, const ScalingResult& sr);
ScalingResult read_scaling(std::istream& in);

void write_restoration_report(std::ostream& out, const RestorationResult& r);

/// `key=value` lines; blank lines and lines starting with # are skipped.
std::map<std::string, std::string> read_key_values(std::istream& in);

std::string format_double(double x);

} // namespace ratpencil::io
