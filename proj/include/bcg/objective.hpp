#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <optional>
#include <vector>

#include "bcg/atom.hpp"

namespace bcg {

// Convex objective seen by the solvers: value, gradient, and a cheap
// one-dimensional restriction for segment line searches.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual Eigen::Index dim() const = 0;
  virtual double value(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd& x) const = 0;
  // Evaluator of gamma -> f(x + gamma * dir). The default recomputes f from
  // scratch; quadratic objectives override with an O(1)-per-eval form.
  virtual std::function<double(double)> segment(const Eigen::VectorXd& x,
                                                const Eigen::VectorXd& dir) const;
  virtual std::optional<double> smoothness() const { return std::nullopt; }
  virtual std::optional<double> strong_convexity() const { return std::nullopt; }
};

// f(x) = ||A x - b||^2 with A sparse m x n. Smoothness and strong convexity
// constants come from the spectrum of A^T A: a dense eigensolve when n is
// small enough to afford it, power iteration for the top eigenvalue
// otherwise (strong convexity is reported as 0 when m < n or the dense
// route is unavailable).
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(Eigen::SparseMatrix<double> A, Eigen::VectorXd b);
  QuadraticObjective(const Eigen::MatrixXd& A, Eigen::VectorXd b);

  Eigen::Index dim() const override { return A_.cols(); }
  Eigen::Index rows() const { return A_.rows(); }
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  std::function<double(double)> segment(const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& dir) const override;
  std::optional<double> smoothness() const override { return L_; }
  std::optional<double> strong_convexity() const override { return alpha_; }

  const Eigen::SparseMatrix<double>& A() const { return A_; }
  const Eigen::VectorXd& b() const { return b_; }
  double L() const { return L_; }
  double alpha() const { return alpha_; }

 private:
  void compute_constants();
  Eigen::SparseMatrix<double> A_;
  Eigen::VectorXd b_;
  double L_ = 0.0;
  double alpha_ = 0.0;
};

// Largest eigenvalue of the symmetric PSD operator w -> op(w) on R^n by
// power iteration with a deterministic start; converges to `rel_tol` on the
// Rayleigh quotient or throws after `budget` iterations.
double power_lambda_max(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& op,
                        Eigen::Index n, double rel_tol = 1e-8, int budget = 20000);

// Smoothness of f restricted to the convex hull of `atoms` as a function of
// the barycentric weights. Weight differences sum to zero, so this is
// lambda_max of 2 V^T A^T A V over the mean-zero subspace, by power
// iteration. Singletons are flat and yield zero.
double restricted_smoothness(const QuadraticObjective& f, const std::vector<Atom>& atoms,
                             double rel_tol = 1e-8, int budget = 20000);

}  // namespace bcg
