#pragma once

#include <Eigen/Dense>

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ratpencil {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kEpsM = std::numeric_limits<double>::epsilon();

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Bad argument values such as a zero block size.
class ArgumentError : public Error {
  public:
    using Error::Error;
};

// Shapes or degrees that do not fit together.
class StructuralError : public Error {
  public:
    using Error::Error;
};

// A matrix that has to be inverted is (numerically) singular.
class DegeneracyError : public Error {
  public:
    using Error::Error;
};

class ConvergenceError : public Error {
  public:
    ConvergenceError(const std::string& what, double last_residual)
        : Error(what), last_residual_(last_residual) {}
    double last_residual() const noexcept { return last_residual_; }

  private:
    double last_residual_;
};

// A self-check of an algebraic identity failed.
class ConsistencyError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

/// P(λ) = p0 + λ·p1. A pencil written A − λB is stored as p0 = A, p1 = −B.
struct Pencil {
    Matrix p0;
    Matrix p1;

    Pencil() = default;
    Pencil(Matrix a0, Matrix a1);

    static Pencil zero(Index rows, Index cols);
    /// The pencil A − λB.
    static Pencil a_minus_lambda_b(const Matrix& a, const Matrix& b);
    static Pencil constant(const Matrix& a);

    Index rows() const { return p0.rows(); }
    Index cols() const { return p0.cols(); }

    Pencil block(Index r, Index c, Index nr, Index nc) const;
    void set_block(Index r, Index c, const Pencil& b);
    Pencil transpose() const;

    Pencil& operator+=(const Pencil& o);
    Pencil& operator-=(const Pencil& o);
};

Pencil operator+(Pencil a, const Pencil& b);
Pencil operator-(Pencil a, const Pencil& b);
Pencil operator*(Complex s, const Pencil& p);
Pencil operator*(const Matrix& left, const Pencil& p);
Pencil operator*(const Pencil& p, const Matrix& right);

/// D(λ) = Σ coeffs[i]·λⁱ.
struct PolyMatrix {
    std::vector<Matrix> coeffs;

    PolyMatrix() = default;
    explicit PolyMatrix(std::vector<Matrix> c);

    static PolyMatrix zero(Index rows, Index cols, int degree);

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    Index rows() const { return coeffs.empty() ? 0 : coeffs.front().rows(); }
    Index cols() const { return coeffs.empty() ? 0 : coeffs.front().cols(); }
};

/// R(λ) = C(λI − A)⁻¹B + D(λ).
struct RationalQuadruple {
    Matrix A;
    Matrix B;
    Matrix C;
    PolyMatrix D;

    RationalQuadruple() = default;
    RationalQuadruple(Matrix a, Matrix b, Matrix c, PolyMatrix d);

    Index ell() const { return A.rows(); }
    Index m() const { return C.rows(); }
    Index n() const { return B.cols(); }
    int degree() const { return D.degree(); }

    /// Throws StructuralError on incompatible sizes or ℓ = 0.
    void validate() const;
};

} // namespace ratpencil
