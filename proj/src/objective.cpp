#include "bcg/objective.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace bcg {

namespace {
// Above this column count the dense n x n eigensolve of A^T A is skipped.
constexpr Eigen::Index kDenseSpectrumLimit = 1024;
}  // namespace

std::function<double(double)> Objective::segment(const Eigen::VectorXd& x,
                                                 const Eigen::VectorXd& dir) const {
  return [this, x, dir](double gamma) { return value(x + gamma * dir); };
}

QuadraticObjective::QuadraticObjective(Eigen::SparseMatrix<double> A, Eigen::VectorXd b)
    : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() != b_.size())
    throw std::invalid_argument("QuadraticObjective: A rows and b size differ");
  A_.makeCompressed();
  compute_constants();
}

QuadraticObjective::QuadraticObjective(const Eigen::MatrixXd& A, Eigen::VectorXd b)
    : QuadraticObjective(Eigen::SparseMatrix<double>(A.sparseView()), std::move(b)) {}

double QuadraticObjective::value(const Eigen::VectorXd& x) const {
  return (A_ * x - b_).squaredNorm();
}

Eigen::VectorXd QuadraticObjective::gradient(const Eigen::VectorXd& x) const {
  return 2.0 * (A_.transpose() * (A_ * x - b_));
}

std::function<double(double)> QuadraticObjective::segment(const Eigen::VectorXd& x,
                                                          const Eigen::VectorXd& dir) const {
  // f(x + g d) = ||r + g s||^2 = r.r + 2 g r.s + g^2 s.s, two matvecs total.
  const Eigen::VectorXd r = A_ * x - b_;
  const Eigen::VectorXd s = A_ * dir;
  const double rr = r.squaredNorm();
  const double rs = r.dot(s);
  const double ss = s.squaredNorm();
  return [rr, rs, ss](double gamma) { return rr + 2.0 * gamma * rs + gamma * gamma * ss; };
}

void QuadraticObjective::compute_constants() {
  const Eigen::Index n = A_.cols();
  const Eigen::Index m = A_.rows();
  if (n <= kDenseSpectrumLimit) {
    const Eigen::MatrixXd gram = Eigen::MatrixXd(A_.transpose() * A_);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("QuadraticObjective: eigensolve failed");
    L_ = 2.0 * std::max(0.0, es.eigenvalues().maxCoeff());
    alpha_ = m < n ? 0.0 : 2.0 * std::max(0.0, es.eigenvalues().minCoeff());
  } else {
    const auto& A = A_;
    L_ = 2.0 * power_lambda_max(
                   [&A](const Eigen::VectorXd& w) {
                     return Eigen::VectorXd(A.transpose() * (A * w));
                   },
                   n);
    alpha_ = 0.0;
  }
}

double power_lambda_max(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& op,
                        Eigen::Index n, double rel_tol, int budget) {
  if (n == 0) return 0.0;
  // Deterministic starts with mild tilts so the first vector is not
  // orthogonal to a top eigenvector by symmetry; a start inside the null
  // space triggers the next restart pattern.
  for (int restart = 0; restart < 3; ++restart) {
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double tilt = static_cast<double>((i + restart) % 17) / 17.0;
      w[i] = (restart == 1 && i % 2 == 1 ? -1.0 : 1.0) + 1e-3 * tilt + 1e-2 * restart;
    }
    w.normalize();
    double theta = 0.0;
    bool dead_start = false;
    for (int it = 0; it < budget; ++it) {
      Eigen::VectorXd z = op(w);
      const double nz = z.norm();
      if (nz == 0.0) {
        dead_start = true;  // w sits in the null space; try another start
        break;
      }
      const double theta_new = w.dot(z);
      w = z / nz;
      if (it > 0 &&
          std::abs(theta_new - theta) <= rel_tol * std::max(std::abs(theta_new), 1e-300)) {
        return theta_new;
      }
      theta = theta_new;
    }
    if (!dead_start)
      throw std::runtime_error("power_lambda_max: no convergence within budget");
  }
  return 0.0;  // every start died inside the null space; treat as zero operator
}

double restricted_smoothness(const QuadraticObjective& f, const std::vector<Atom>& atoms,
                             double rel_tol, int budget) {
  if (atoms.empty()) throw std::invalid_argument("restricted_smoothness: empty set");
  const auto k = static_cast<Eigen::Index>(atoms.size());
  Eigen::MatrixXd B(f.rows(), k);  // B = A V
  for (Eigen::Index i = 0; i < k; ++i)
    B.col(i) = f.A() * atoms[static_cast<std::size_t>(i)].coords();
  // Weight curves stay inside the simplex, so only mean-zero directions
  // matter; project them out on both sides of the operator.
  const auto center = [](Eigen::VectorXd w) {
    w.array() -= w.mean();
    return w;
  };
  return power_lambda_max(
      [&B, &center](const Eigen::VectorXd& w) {
        return center(Eigen::VectorXd(2.0 * (B.transpose() * (B * center(w)))));
      },
      k, rel_tol, budget);
}

}  // namespace bcg
