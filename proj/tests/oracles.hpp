#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "bcg/atom.hpp"
#include "bcg/objective.hpp"

// Reference implementations the tests trust: slow, simple, and written
// independently of the library code they check.
namespace bcg::oracles {

// Euclidean projection onto {x >= 0, sum x = radius} by the sort rule.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v, double radius = 1.0);
// Componentwise clamp onto [lo, hi]^n.
Eigen::VectorXd project_box(const Eigen::VectorXd& v, double lo, double hi);
// Projection onto the l1 ball of radius tau via the simplex projection of
// the absolute values.
Eigen::VectorXd project_l1(const Eigen::VectorXd& v, double tau);

struct PgdResult {
  Eigen::VectorXd x;
  double f_value = 0.0;
  long iterations = 0;
};

// Projected gradient descent with a fixed step, run until the iterate
// movement falls below tol (infinity norm) or the budget runs out.
PgdResult projected_gradient(const Objective& obj,
                             const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& project,
                             Eigen::VectorXd x0, double step, long budget, double tol);

struct SimplexQpResult {
  Eigen::VectorXd x;
  double f_value = 0.0;
};

// Exact minimum of ||Ax - b||^2 over the probability simplex by
// enumerating every support and solving the stationarity system on its
// affine slice. Exponential in the dimension; guarded at 16.
SimplexQpResult simplex_qp_enumerate(const QuadraticObjective& obj);

struct AssignmentResult {
  std::vector<int> perm;  // perm[row] = column
  double cost = 0.0;
};

// Min-cost assignment by subset dynamic programming, O(2^n n); n <= 22.
AssignmentResult assignment_dp(const Eigen::MatrixXd& cost);
// Min-cost assignment by full enumeration; n <= 8. First minimizer in
// lexicographic permutation order.
AssignmentResult assignment_bruteforce(const Eigen::MatrixXd& cost);

// Central differences, h scaled per coordinate.
Eigen::VectorXd numeric_gradient(const Objective& obj, const Eigen::VectorXd& x, double h = 1e-6);

// lambda_max of 2 V^T A^T A V over mean-zero weight directions by dense
// eigensolve, V = atom coordinates.
double dense_restricted_smoothness(const QuadraticObjective& obj, const std::vector<Atom>& atoms);
// {2 lambda_max, 2 lambda_min} of A^T A by dense eigensolve.
std::pair<double, double> dense_extremes(const QuadraticObjective& obj);

// f(x) = <c, x>; exercises solvers and searches on flat objectives.
class LinearObjective final : public Objective {
 public:
  explicit LinearObjective(Eigen::VectorXd c) : c_(std::move(c)) {}
  Eigen::Index dim() const override { return c_.size(); }
  double value(const Eigen::VectorXd& x) const override { return c_.dot(x); }
  Eigen::VectorXd gradient(const Eigen::VectorXd&) const override { return c_; }

 private:
  Eigen::VectorXd c_;
};

}  // namespace bcg::oracles
