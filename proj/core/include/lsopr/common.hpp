#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace lsopr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct NonSymmetricError : std::runtime_error {
  explicit NonSymmetricError(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct SizeLimitError : std::runtime_error {
  explicit SizeLimitError(const std::string& what) : std::runtime_error(what) {}
};

struct DegeneratePricingError : std::runtime_error {
  explicit DegeneratePricingError(const std::string& what) : std::runtime_error(what) {}
};

/// Global tolerance defaults. The numeric-rank cutoff is a knob; everything
/// that counts spectrum entries takes it as a parameter defaulting to this.
struct Tolerances {
  static constexpr double rank = 1e-10;
  static constexpr double symmetry = 1e-9;
  static constexpr double membership = 1e-8;
  static constexpr double majorization = 1e-9;
  static constexpr double lp_feasibility = 1e-8;
  static constexpr double lp_optimality = 1e-9;
  static constexpr double row_feasibility = 1e-7;
};

inline double frobenius_inner(const Matrix& a, const Matrix& b) {
  return (a.array() * b.array()).sum();
}

}  // namespace lsopr
