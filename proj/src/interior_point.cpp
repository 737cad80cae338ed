#include "noma/interior_point.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace noma::ipm {

Result minimize(const ConvexObjective& objective, const Eigen::MatrixXd& A_in, const Eigen::VectorXd& b_in,
                const Eigen::VectorXd& start, const Options& options) {
  const Eigen::Index n = start.size();
  const Eigen::Index p = A_in.rows();
  if (A_in.cols() != n || b_in.size() != p) throw std::invalid_argument("ipm: dimension mismatch");
  if (p == 0) throw std::invalid_argument("ipm: at least one constraint row required");
  auto in_domain = [&](const Eigen::VectorXd& z) { return !objective.in_domain || objective.in_domain(z); };

  // Unit-norm rows keep the barrier terms on one scale.
  Eigen::VectorXd row_scale(p);
  for (Eigen::Index r = 0; r < p; ++r) {
    double nrm = A_in.row(r).norm();
    if (!(nrm > 0.0)) throw std::invalid_argument("ipm: zero constraint row");
    row_scale[r] = 1.0 / nrm;
  }
  const Eigen::MatrixXd A = row_scale.asDiagonal() * A_in;
  const Eigen::VectorXd b = row_scale.asDiagonal() * b_in;

  auto slack = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd { return b - A * z; };
  auto strictly_feasible = [&](const Eigen::VectorXd& z) { return slack(z).minCoeff() > 0.0 && in_domain(z); };
  if (!strictly_feasible(start)) throw std::invalid_argument("ipm: start must be strictly feasible and in the domain");

  Eigen::VectorXd z = start;
  double t = options.initial_t;
  auto barrier = [&](const Eigen::VectorXd& y) { return t * objective.value(y) - slack(y).array().log().sum(); };

  Result result;
  const double rows = static_cast<double>(p);
  double last_decrement = 0.0;
  while (true) {
    // Centering: damped Newton on t f(z) - sum log(b - A z).
    while (result.iterations < options.max_iterations) {
      const Eigen::VectorXd s = slack(z);
      const Eigen::VectorXd inv_s = s.cwiseInverse();
      const Eigen::VectorXd g = t * objective.gradient(z) + A.transpose() * inv_s;
      const Eigen::MatrixXd H =
          t * objective.hessian(z) + A.transpose() * inv_s.cwiseProduct(inv_s).asDiagonal() * A;
      Eigen::LDLT<Eigen::MatrixXd> factor(H);
      if (factor.info() != Eigen::Success) break;
      const Eigen::VectorXd dz = -factor.solve(g);
      const double decrement2 = -g.dot(dz);
      last_decrement = decrement2;
      if (!(decrement2 > 2e-12)) break;

      double alpha = 1.0;
      int shrink = 0;
      while (!strictly_feasible(z + alpha * dz) && shrink < 80) {
        alpha *= 0.5;
        ++shrink;
      }
      // Inside the quadratic region a full Newton step is safe for a self-concordant
      // barrier; Armijo tests there would only measure rounding in t f.
      if (decrement2 > 1.0 / 16.0 || alpha < 1.0) {
        const double phi = barrier(z);
        while (barrier(z + alpha * dz) > phi - 0.01 * alpha * decrement2 && shrink < 80) {
          alpha *= 0.5;
          ++shrink;
        }
      }
      if (shrink >= 80 || !strictly_feasible(z + alpha * dz)) break;
      z += alpha * dz;
      ++result.iterations;
    }
    if (rows / t <= options.tolerance) {
      // The gap bound holds only near the central path.
      result.converged = last_decrement <= 1e-10;
      break;
    }
    if (result.iterations >= options.max_iterations) break;
    t *= options.barrier_growth;
  }

  const Eigen::VectorXd s = slack(z);
  const Eigen::VectorXd lambda = (t * s).cwiseInverse();
  const Eigen::VectorXd grad = objective.gradient(z);
  result.z = z;
  result.multipliers = row_scale.cwiseProduct(lambda);
  result.stationarity = (grad + A.transpose() * lambda).lpNorm<Eigen::Infinity>() / (1.0 + grad.lpNorm<Eigen::Infinity>());
  result.primal_violation = std::max(0.0, -s.minCoeff());
  result.complementarity = rows / t;
  return result;
}

}  // namespace noma::ipm
