#include <cmath>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"

#include "bcg/instances.hpp"
#include "bcg/objective.hpp"
#include "bcg/rng.hpp"

namespace {

Eigen::MatrixXd gaussian_matrix(Eigen::Index m, Eigen::Index n, bcg::Rng& rng) {
  Eigen::MatrixXd A(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = rng.normal();
  }
  return A;
}

Eigen::VectorXd gaussian_vector(Eigen::Index n, bcg::Rng& rng) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

}  // namespace

TEST_CASE("quadratic value and gradient match the definition and differences") {
  bcg::Rng rng(31);
  const Eigen::MatrixXd A = gaussian_matrix(6, 4, rng);
  const Eigen::VectorXd b = gaussian_vector(6, rng);
  const bcg::QuadraticObjective f(A, b);
  const Eigen::VectorXd x = gaussian_vector(4, rng);

  CHECK(f.value(x) == doctest::Approx((A * x - b).squaredNorm()).epsilon(1e-12));
  const Eigen::VectorXd g = f.gradient(x);
  const Eigen::VectorXd manual = 2.0 * A.transpose() * (A * x - b);
  CHECK((g - manual).cwiseAbs().maxCoeff() < 1e-10);
  const Eigen::VectorXd fd = bcg::oracles::numeric_gradient(f, x);
  CHECK((g - fd).cwiseAbs().maxCoeff() / (1.0 + g.cwiseAbs().maxCoeff()) < 1e-6);
}

TEST_CASE("segment evaluator agrees with recomputation from scratch") {
  bcg::Rng rng(32);
  const Eigen::MatrixXd A = gaussian_matrix(5, 5, rng);
  const Eigen::VectorXd b = gaussian_vector(5, rng);
  const bcg::QuadraticObjective f(A, b);
  const Eigen::VectorXd x = gaussian_vector(5, rng);
  const Eigen::VectorXd dir = gaussian_vector(5, rng);
  const auto phi = f.segment(x, dir);
  for (double gamma : {0.0, 0.1, 0.5, 1.0, -0.3}) {
    const double direct = f.value(x + gamma * dir);
    CHECK(phi(gamma) == doctest::Approx(direct).epsilon(1e-11));
  }
}

TEST_CASE("smoothness and strong convexity come from the spectrum") {
  bcg::Rng rng(33);
  const Eigen::MatrixXd A = gaussian_matrix(8, 5, rng);
  const Eigen::VectorXd b = gaussian_vector(8, rng);
  const bcg::QuadraticObjective f(A, b);
  const auto [lmax, lmin] = bcg::oracles::dense_extremes(f);
  CHECK(f.L() == doctest::Approx(lmax).epsilon(1e-6));
  CHECK(f.alpha() == doctest::Approx(lmin).epsilon(1e-6));
  CHECK(f.smoothness().value() == f.L());
  CHECK(f.strong_convexity().value() == f.alpha());

  // Rank-deficient case: no strong convexity.
  const Eigen::MatrixXd W = gaussian_matrix(3, 5, rng);
  const bcg::QuadraticObjective flat(W, gaussian_vector(3, rng));
  CHECK(flat.alpha() == 0.0);
}

TEST_CASE("power iteration matches the dense eigensolve") {
  bcg::Rng rng(34);
  const Eigen::MatrixXd B = gaussian_matrix(7, 7, rng);
  const Eigen::MatrixXd S = B.transpose() * B;
  const double ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(S).eigenvalues().maxCoeff();
  const double est = bcg::power_lambda_max([&](const Eigen::VectorXd& w) { return S * w; },
                                           7, 1e-10, 20000);
  CHECK(est == doctest::Approx(ref).epsilon(1e-6));
  CHECK_THROWS(bcg::power_lambda_max([&](const Eigen::VectorXd& w) { return S * w; }, 7, 1e-14, 1));
}

TEST_CASE("restricted smoothness matches the dense oracle") {
  bcg::Rng rng(35);
  const Eigen::MatrixXd A = gaussian_matrix(9, 6, rng);
  const bcg::QuadraticObjective f(A, gaussian_vector(9, rng));
  const bcg::Simplex simplex(6);
  std::vector<bcg::Atom> atoms;
  for (int i : {0, 2, 4, 5}) atoms.push_back(simplex.vertex(i));
  const double mine = bcg::restricted_smoothness(f, atoms);
  const double ref = bcg::oracles::dense_restricted_smoothness(f, atoms);
  CHECK(mine == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("instance generation is deterministic in the seed") {
  for (const bcg::InstanceSpec& spec :
       {bcg::InstanceSpec(bcg::LassoSpec{20, 30, 4, 2.0}),
        bcg::InstanceSpec(bcg::SignalRecoverySpec{15, 25, 0.3, 0.01, 0.0}),
        bcg::InstanceSpec(bcg::SimplexQuadraticSpec{6, 0.01})}) {
    const bcg::Instance a = bcg::generate(spec, 42);
    const bcg::Instance b = bcg::generate(spec, 42);
    CHECK(a.objective->b() == b.objective->b());
    CHECK(Eigen::MatrixXd(a.objective->A()) == Eigen::MatrixXd(b.objective->A()));
    CHECK(a.start.key() == b.start.key());
    CHECK(a.meta == b.meta);
    const bcg::Instance c = bcg::generate(spec, 43);
    CHECK(c.objective->b() != a.objective->b());
  }
}

TEST_CASE("every family produces a feasible start and consistent dimensions") {
  std::vector<bcg::InstanceSpec> specs;
  specs.emplace_back(bcg::LassoSpec{20, 30, 4, 2.0});
  specs.emplace_back(bcg::SignalRecoverySpec{15, 25, 0.3, 0.01, 0.0});
  {
    bcg::StructuredRegressionSpec s;
    s.kind = bcg::StructuredRegressionSpec::Kind::Birkhoff;
    s.birkhoff_n = 4;
    specs.emplace_back(s);
  }
  {
    bcg::StructuredRegressionSpec s;
    s.kind = bcg::StructuredRegressionSpec::Kind::DagPath;
    s.dag_layers = 3;
    s.dag_width = 2;
    s.dag_skips = 2;
    specs.emplace_back(s);
  }
  specs.emplace_back(bcg::SimplexQuadraticSpec{6, 0.01});

  for (const auto& spec : specs) {
    const bcg::Instance inst = bcg::generate(spec, 5);
    CHECK(inst.objective->dim() == inst.region->ambient_dim());
    CHECK(inst.region->membership(inst.start.coords(), 1e-9));
    CHECK(inst.meta.contains("seed"));
    CHECK(inst.meta.contains("family"));
    CHECK(inst.meta.contains("rng"));
  }
}

TEST_CASE("structured regression uses full-rank row counts by default") {
  bcg::StructuredRegressionSpec s;
  s.kind = bcg::StructuredRegressionSpec::Kind::Birkhoff;
  s.birkhoff_n = 4;
  const bcg::Instance inst = bcg::generate(s, 1);
  CHECK(inst.objective->rows() == 16 + 100);
}

TEST_CASE("simplex quadratic family puts its unconstrained minimizer outside") {
  const bcg::Instance inst = bcg::generate(bcg::SimplexQuadraticSpec{6, 0.05}, 3);
  const auto qp = bcg::oracles::simplex_qp_enumerate(*inst.objective);
  CHECK(qp.f_value > 1e-8);  // the constrained optimum cannot reach zero residual
  CHECK(inst.objective->alpha() > 0.0);
}

TEST_CASE("matrix market and plain vectors round trip bit for bit") {
  bcg::Rng rng(36);
  Eigen::SparseMatrix<double> A(7, 5);
  std::vector<Eigen::Triplet<double>> trips;
  for (int k = 0; k < 12; ++k) {
    trips.emplace_back(static_cast<int>(rng.uniform_int(7)), static_cast<int>(rng.uniform_int(5)),
                       rng.normal());
  }
  A.setFromTriplets(trips.begin(), trips.end());
  std::stringstream ss;
  bcg::write_matrix_market(A, ss);
  const Eigen::SparseMatrix<double> B = bcg::read_matrix_market(ss);
  CHECK(Eigen::MatrixXd(A) == Eigen::MatrixXd(B));

  const Eigen::VectorXd v = gaussian_vector(9, rng);
  std::stringstream vs;
  bcg::write_plain_vector(v, vs);
  const Eigen::VectorXd w = bcg::read_plain_vector(vs);
  CHECK(v == w);
}

TEST_CASE("instances save and load through a directory") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "bcg_test_instance_io";
  fs::remove_all(dir);
  fs::create_directories(dir);

  bcg::StructuredRegressionSpec s;
  s.kind = bcg::StructuredRegressionSpec::Kind::DagPath;
  s.dag_layers = 3;
  s.dag_width = 2;
  s.dag_skips = 1;
  const bcg::Instance inst = bcg::generate(s, 8);
  bcg::save_instance(inst, dir.string());
  const bcg::Instance back = bcg::load_instance(dir.string());

  CHECK(Eigen::MatrixXd(back.objective->A()) == Eigen::MatrixXd(inst.objective->A()));
  CHECK(back.objective->b() == inst.objective->b());
  CHECK(back.start.key() == inst.start.key());
  CHECK(back.start.coords() == inst.start.coords());
  CHECK(back.region->ambient_dim() == inst.region->ambient_dim());
  CHECK(back.region->name() == inst.region->name());
  fs::remove_all(dir);
}
