#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "noma/interior_point.hpp"

using noma::ipm::ConvexObjective;
using noma::ipm::minimize;

namespace {

ConvexObjective quadratic(Eigen::VectorXd center) {
  ConvexObjective obj;
  obj.value = [center](const Eigen::VectorXd& z) { return 0.5 * (z - center).squaredNorm(); };
  obj.gradient = [center](const Eigen::VectorXd& z) { return Eigen::VectorXd(z - center); };
  obj.hessian = [](const Eigen::VectorXd& z) {
    return Eigen::MatrixXd(Eigen::MatrixXd::Identity(z.size(), z.size()));
  };
  return obj;
}

}  // namespace

TEST_CASE("projection onto a half-plane") {
  // min |z - (2, 2)|^2 / 2 s.t. z1 + z2 <= 2 has solution (1, 1) and multiplier 1.
  Eigen::MatrixXd A(1, 2);
  A << 1.0, 1.0;
  Eigen::VectorXd b(1);
  b << 2.0;
  auto res = minimize(quadratic(Eigen::Vector2d(2.0, 2.0)), A, b, Eigen::Vector2d(0.0, 0.0));
  CHECK(res.converged);
  CHECK(res.z[0] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(res.z[1] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(res.multipliers[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(res.stationarity <= 1e-6);
}

TEST_CASE("inactive constraints leave the unconstrained minimizer") {
  Eigen::MatrixXd A(2, 2);
  A << 1.0, 0.0, 0.0, 1.0;
  Eigen::VectorXd b(2);
  b << 10.0, 10.0;
  auto res = minimize(quadratic(Eigen::Vector2d(0.5, -3.0)), A, b, Eigen::Vector2d(0.0, 0.0));
  CHECK(res.converged);
  CHECK(res.z[0] == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(res.z[1] == doctest::Approx(-3.0).epsilon(1e-7));
}

TEST_CASE("log objective with a domain") {
  // max log z1 + log z2 s.t. z1 + 2 z2 <= 4, z >= 0 has solution (2, 1).
  ConvexObjective obj;
  obj.value = [](const Eigen::VectorXd& z) { return -std::log(z[0]) - std::log(z[1]); };
  obj.gradient = [](const Eigen::VectorXd& z) { return Eigen::VectorXd(Eigen::Vector2d(-1.0 / z[0], -1.0 / z[1])); };
  obj.hessian = [](const Eigen::VectorXd& z) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, 2);
    h(0, 0) = 1.0 / (z[0] * z[0]);
    h(1, 1) = 1.0 / (z[1] * z[1]);
    return h;
  };
  obj.in_domain = [](const Eigen::VectorXd& z) { return z[0] > 0.0 && z[1] > 0.0; };
  Eigen::MatrixXd A(3, 2);
  A << 1.0, 2.0, -1.0, 0.0, 0.0, -1.0;
  Eigen::VectorXd b(3);
  b << 4.0, 0.0, 0.0;
  auto res = minimize(obj, A, b, Eigen::Vector2d(0.5, 0.5));
  CHECK(res.converged);
  CHECK(res.z[0] == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(res.z[1] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(res.complementarity <= 1e-9);
}

TEST_CASE("bad inputs are rejected") {
  Eigen::MatrixXd A(1, 2);
  A << 1.0, 1.0;
  Eigen::VectorXd b(1);
  b << 2.0;
  CHECK_THROWS_AS(minimize(quadratic(Eigen::Vector2d(0, 0)), A, b, Eigen::Vector2d(1.0, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(minimize(quadratic(Eigen::Vector2d(0, 0)), A, b, Eigen::Vector3d(0, 0, 0)), std::invalid_argument);
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 2);
  CHECK_THROWS_AS(minimize(quadratic(Eigen::Vector2d(0, 0)), zero, b, Eigen::Vector2d(0, 0)), std::invalid_argument);
}
