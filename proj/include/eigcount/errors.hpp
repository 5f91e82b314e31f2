#pragma once

#include <complex>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>

namespace eigcount {

using cplx = std::complex<double>;

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Matrix Market field or format the reader refuses (e.g. `pattern`).
class UnsupportedFormat : public Error {
public:
  using Error::Error;
};

/// Numerical breakdown: non-finite data, non-converging iteration and the like.
class NumericalFailure : public Error {
public:
  using Error::Error;
};

class SingularMatrix : public NumericalFailure {
public:
  explicit SingularMatrix(std::size_t column)
      : NumericalFailure("singular matrix: zero pivot in column " + std::to_string(column)),
        column_(column) {}
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t column_;
};

/// A point passed to the filter coincides with a quadrature node.
class NodeCollision : public NumericalFailure {
public:
  NodeCollision(std::size_t node, cplx z)
      : NumericalFailure(describe(node, z)), node_(node), z_(z) {}
  std::size_t node() const noexcept { return node_; }
  cplx z() const noexcept { return z_; }

private:
  static std::string describe(std::size_t node, cplx z) {
    std::ostringstream os;
    os.precision(17);
    os << "point coincides with quadrature node j=" << node + 1 << " (z=" << z.real() << "+"
       << z.imag() << "i)";
    return os.str();
  }
  std::size_t node_;
  cplx z_;
};

/// Shifted matrix z_j B - A is exactly singular; z_j is an eigenvalue of the pencil.
class NodeSingular : public NumericalFailure {
public:
  NodeSingular(std::size_t node, cplx z)
      : NumericalFailure(describe(node, z)), node_(node), z_(z) {}
  /// Zero-based node index.
  std::size_t node() const noexcept { return node_; }
  cplx z() const noexcept { return z_; }

private:
  static std::string describe(std::size_t node, cplx z) {
    std::ostringstream os;
    os.precision(17);
    os << "shifted matrix singular at quadrature node j=" << node + 1 << " (z=" << z.real()
       << (z.imag() < 0 ? "" : "+") << z.imag()
       << "i); an eigenvalue lies on the contour, perturb the radius slightly";
    return os.str();
  }
  std::size_t node_;
  cplx z_;
};

/// Every shifted matrix is singular: the pencil is not regular.
class AllNodesSingular : public NumericalFailure {
public:
  AllNodesSingular()
      : NumericalFailure("all shifted matrices are singular; the pencil zB - A is not regular") {}
};

class DenseCapExceeded : public Error {
public:
  DenseCapExceeded(std::size_t n, std::size_t cap)
      : Error("dimension " + std::to_string(n) + " exceeds the dense working-form cap " +
              std::to_string(cap) +
              "; raise dense_cap if memory allows (sparse factorization is not supported)") {}
};

class DegenerateVector : public NumericalFailure {
public:
  DegenerateVector() : NumericalFailure("residual undefined: A x = B x = 0") {}
};

class IllConditionedProjection : public NumericalFailure {
public:
  explicit IllConditionedProjection(double condition)
      : NumericalFailure("projected matrix B~ is numerically singular (condition estimate " +
                         std::to_string(condition) + ")"),
        condition_(condition) {}
  double condition() const noexcept { return condition_; }

private:
  double condition_;
};

}  // namespace eigcount
