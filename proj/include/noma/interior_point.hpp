#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>

namespace noma::ipm {

/// Smooth convex objective with an open domain.
struct ConvexObjective {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;
  /// Defaults to "everywhere" when empty.
  std::function<bool(const Eigen::VectorXd&)> in_domain;
};

struct Options {
  /// Stop once the duality gap bound rows / t falls below this.
  double tolerance = 1e-9;
  /// Newton steps over all barrier stages.
  std::size_t max_iterations = 500;
  double initial_t = 1.0;
  double barrier_growth = 10.0;
};

struct Result {
  Eigen::VectorXd z;
  /// Multipliers of the rows of `A z <= b`, estimated as 1 / (t s).
  Eigen::VectorXd multipliers;
  std::size_t iterations = 0;
  /// ||grad + A^T lambda||_inf / (1 + ||grad||_inf), rows normalized.
  double stationarity = 0.0;
  /// max(A z - b)_+ in row-normalized units.
  double primal_violation = 0.0;
  /// Duality gap bound rows / t at exit.
  double complementarity = 0.0;
  bool converged = false;
};

/// Minimizes `objective` subject to `A z <= b` by a log-barrier method with
/// damped Newton steps. `start` must satisfy every row strictly and lie in
/// the objective's domain; the iterates stay strictly feasible.
Result minimize(const ConvexObjective& objective, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                const Eigen::VectorXd& start, const Options& options = {});

}  // namespace noma::ipm
