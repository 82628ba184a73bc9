#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "bcg/atom.hpp"
#include "bcg/dag.hpp"

namespace bcg {

// Feasible region with an exact linear minimization oracle. lmo() is
// deterministic: ties are broken by a fixed rule per region, so identical
// cost vectors always yield the same atom key.
class Region {
 public:
  virtual ~Region() = default;
  virtual Eigen::Index ambient_dim() const = 0;
  // argmin_{v vertex} <c, v>, as an atom with exact key.
  virtual Atom lmo(const Eigen::VectorXd& c) const = 0;
  virtual bool membership(const Eigen::VectorXd& x, double tol) const = 0;
  virtual double diameter() const = 0;
  virtual std::string name() const = 0;
};

// Probability simplex in R^k. Vertices e_i; lmo ties go to the lowest index.
class Simplex final : public Region {
 public:
  explicit Simplex(int k);
  Eigen::Index ambient_dim() const override { return k_; }
  Atom lmo(const Eigen::VectorXd& c) const override;
  bool membership(const Eigen::VectorXd& x, double tol) const override;
  double diameter() const override;  // sqrt(2)
  std::string name() const override;
  Atom vertex(int i) const;

 private:
  int k_;
};

// Unit cube [0,1]^n. lmo puts 1 exactly where c_i < 0 (ties -> 0).
class Cube final : public Region {
 public:
  explicit Cube(int n);
  Eigen::Index ambient_dim() const override { return n_; }
  Atom lmo(const Eigen::VectorXd& c) const override;
  bool membership(const Eigen::VectorXd& x, double tol) const override;
  double diameter() const override;  // sqrt(n)
  std::string name() const override;

 private:
  int n_;
};

// Scaled l1 ball, radius tau. Vertices are +-tau e_i. lmo picks the largest
// |c_i| (ties -> lowest index, sign(0) treated as +1) and returns
// -tau sign(c_i) e_i.
class L1Ball final : public Region {
 public:
  L1Ball(int n, double tau);
  Eigen::Index ambient_dim() const override { return n_; }
  Atom lmo(const Eigen::VectorXd& c) const override;
  bool membership(const Eigen::VectorXd& x, double tol) const override;
  double diameter() const override;  // 2 tau
  std::string name() const override;
  double tau() const { return tau_; }
  Atom vertex(int i, int sign) const;

 private:
  int n_;
  double tau_;
};

// Birkhoff polytope of n x n doubly stochastic matrices, flattened
// row-major. Vertices are permutation matrices; lmo solves the assignment
// problem exactly in O(n^3).
class Birkhoff final : public Region {
 public:
  explicit Birkhoff(int n);
  Eigen::Index ambient_dim() const override { return static_cast<Eigen::Index>(n_) * n_; }
  Atom lmo(const Eigen::VectorXd& c) const override;
  bool membership(const Eigen::VectorXd& x, double tol) const override;
  double diameter() const override;  // sqrt(2n)
  std::string name() const override;
  int n() const { return n_; }
  Atom vertex(const std::vector<std::int32_t>& perm) const;

 private:
  int n_;
};

// Convex hull of source-sink path indicator vectors of a DAG. Ambient
// coordinates are arcs in arc-index order. lmo is a shortest-path pass in
// topological order (negative costs allowed); ties prefer the lower arc
// index, so the zero cost vector selects a canonical path.
class DagPathRegion final : public Region {
 public:
  explicit DagPathRegion(DagGraph graph);
  Eigen::Index ambient_dim() const override { return static_cast<Eigen::Index>(graph_.arcs.size()); }
  Atom lmo(const Eigen::VectorXd& c) const override;
  // Unit flow conservation within tol at every node, arcs in [0,1].
  bool membership(const Eigen::VectorXd& x, double tol) const override;
  // Upper bound sqrt(2 * max path length), longest path by DAG DP.
  double diameter() const override;
  std::string name() const override;
  const DagGraph& graph() const { return graph_; }
  Atom path_atom(std::vector<std::int32_t> arc_indices) const;

 private:
  DagGraph graph_;
  std::vector<int> topo_;
  std::vector<std::vector<int>> out_;
  int max_path_arcs_;
};

// Convex hull of an explicit atom list; the oracle scans the list. Used to
// re-optimize over a frozen support. Membership is decided approximately
// (distance to the hull via a projected-gradient solve) and is intended
// for diagnostics, not hot paths.
class ConvexHullRegion final : public Region {
 public:
  explicit ConvexHullRegion(std::vector<Atom> atoms);
  Eigen::Index ambient_dim() const override { return atoms_.empty() ? 0 : atoms_[0].dim(); }
  Atom lmo(const Eigen::VectorXd& c) const override;
  bool membership(const Eigen::VectorXd& x, double tol) const override;
  double diameter() const override;  // max pairwise distance, exact scan
  std::string name() const override;
  const std::vector<Atom>& atoms() const { return atoms_; }

 private:
  std::vector<Atom> atoms_;
};

}  // namespace bcg
