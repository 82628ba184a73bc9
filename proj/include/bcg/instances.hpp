#pragma once

#include <Eigen/Sparse>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "json.hpp"

#include "bcg/dag.hpp"
#include "bcg/objective.hpp"
#include "bcg/region.hpp"

namespace bcg {

// Benchmark instance families. Every generator is a pure function of its
// parameters and the seed; the rng version string is recorded in the
// metadata so regenerated instances can be byte-compared.

struct LassoSpec {
  int m = 200;
  int n = 500;
  int nnz = 50;       // support size of the planted signal
  double scale = 50;  // l1-ball radius; the planted signal has l1 norm 2*scale
};

struct SignalRecoverySpec {
  int m = 250;
  int n = 750;
  double density = 0.05;  // sensing matrix fill
  double sigma = 0.05;    // additive noise level
  double tau = 0.0;       // l1-ball radius; <= 0 means ||planted signal||_1
};

struct StructuredRegressionSpec {
  enum class Kind { Birkhoff, DagPath };
  Kind kind = Kind::Birkhoff;
  int m = 0;  // <= 0 means ambient dimension + 100 (full-rank regression)
  int birkhoff_n = 20;
  int dag_layers = 6;
  int dag_width = 4;
  int dag_skips = 8;
  std::optional<std::string> dag_file;  // load instead of generating
};

struct SimplexQuadraticSpec {
  int k = 20;
  // Unconstrained minimizer sits this far outside the simplex (one
  // coordinate at -margin). Small values keep the optimal residual small.
  double margin = 0.002;
};

using InstanceSpec =
    std::variant<LassoSpec, SignalRecoverySpec, StructuredRegressionSpec, SimplexQuadraticSpec>;

struct Instance {
  std::unique_ptr<QuadraticObjective> objective;
  std::unique_ptr<Region> region;
  Atom start;
  nlohmann::json meta;
};

Instance generate(const InstanceSpec& spec, std::uint64_t seed);

// --- plain serialization -------------------------------------------------

// Coordinate-format MatrixMarket, 1-based indices, %.17g values.
void write_matrix_market(const Eigen::SparseMatrix<double>& A, std::ostream& out);
Eigen::SparseMatrix<double> read_matrix_market(std::istream& in);

// One %.17g value per line, nothing else.
void write_plain_vector(const Eigen::VectorXd& v, std::ostream& out);
Eigen::VectorXd read_plain_vector(std::istream& in);

// Writes A.mtx, b.txt, instance.json (and dag.txt for path instances)
// into an existing directory.
void save_instance(const Instance& inst, const std::string& dir);
// Rebuilds an instance from save_instance output.
Instance load_instance(const std::string& dir);

}  // namespace bcg
