#include <cmath>
#include <memory>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

#include "bcg/diagnostics.hpp"
#include "bcg/objective.hpp"
#include "bcg/region.hpp"
#include "bcg/rng.hpp"

namespace {

bcg::QuadraticObjective random_quadratic(Eigen::Index n, int rows, std::uint64_t seed) {
  bcg::Rng rng(seed);
  Eigen::MatrixXd A(rows, n);
  Eigen::VectorXd b(rows);
  for (int i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = rng.normal();
    b[i] = rng.normal();
  }
  return bcg::QuadraticObjective(A, b);
}

// Reports a wrong gradient on purpose so the finite-difference check trips.
class SkewedGradient final : public bcg::Objective {
 public:
  explicit SkewedGradient(Eigen::Index n) : n_(n) {}
  Eigen::Index dim() const override { return n_; }
  double value(const Eigen::VectorXd& x) const override { return x.squaredNorm(); }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override { return 3.0 * x; }

 private:
  Eigen::Index n_;
};

}  // namespace

TEST_CASE("bound reports carry the slack and tolerate rounding") {
  const bcg::BoundReport ok = bcg::make_report("demo", 1.0, 2.0, 0.0);
  CHECK(ok.satisfied);
  CHECK(ok.slack == doctest::Approx(1.0));
  const bcg::BoundReport edge = bcg::make_report("edge", 1.0 + 1e-12, 1.0, 1e-9);
  CHECK(edge.satisfied);
  const bcg::BoundReport bad = bcg::make_report("bad", 2.0, 1.0, 1e-9);
  CHECK_FALSE(bad.satisfied);

  const nlohmann::json parsed = nlohmann::json::parse(bcg::json_line(bad));
  CHECK(parsed.at("name") == "bad");
  CHECK(parsed.at("lhs") == doctest::Approx(2.0));
  CHECK(parsed.at("rhs") == doctest::Approx(1.0));
  CHECK(parsed.at("satisfied") == false);
  CHECK(parsed.at("slack") == doctest::Approx(-1.0));
}

TEST_CASE("the exact gap vanishes at the optimum and matches a vertex scan") {
  const auto f = random_quadratic(5, 7, 21);
  const bcg::Simplex region(5);
  const auto qp = bcg::oracles::simplex_qp_enumerate(f);
  CHECK(bcg::dual_gap(f, region, qp.x) <= 1e-7 * (1.0 + std::abs(qp.f_value)));

  const Eigen::VectorXd x = region.vertex(0).coords();
  const Eigen::VectorXd grad = f.gradient(x);
  double manual = 0.0;
  for (int i = 0; i < 5; ++i) {
    manual = std::max(manual, grad.dot(x - region.vertex(i).coords()));
  }
  CHECK(bcg::dual_gap(f, region, x) == doctest::Approx(manual).epsilon(1e-12));
  CHECK(bcg::dual_gap(f, region, x) > 1e-6);
}

TEST_CASE("the finite-difference gradient check accepts correct gradients only") {
  const auto f = random_quadratic(4, 6, 22);
  bcg::Rng rng(9);
  std::vector<Eigen::VectorXd> points;
  for (int t = 0; t < 3; ++t) {
    Eigen::VectorXd x(4);
    for (int i = 0; i < 4; ++i) x[i] = rng.uniform(-1.0, 1.0);
    points.push_back(x);
  }
  const bcg::BoundReport good = bcg::gradient_check(f, points);
  CHECK(good.name == "gradient_central_difference");
  CHECK(good.satisfied);

  const SkewedGradient skewed(4);
  std::vector<Eigen::VectorXd> far{Eigen::VectorXd::Constant(4, 1.0)};
  CHECK_FALSE(bcg::gradient_check(skewed, far).satisfied);
}

TEST_CASE("sampled curvature stays below twice the simplicial estimate") {
  struct Case {
    std::unique_ptr<bcg::Region> region;
    int rows;
  };
  std::vector<Case> cases;
  cases.push_back({std::make_unique<bcg::Simplex>(5), 8});
  cases.push_back({std::make_unique<bcg::Cube>(4), 7});
  cases.push_back({std::make_unique<bcg::L1Ball>(4, 1.5), 6});
  cases.push_back({std::make_unique<bcg::Birkhoff>(3), 12});
  std::uint64_t seed = 100;
  for (const auto& c : cases) {
    const auto f = random_quadratic(c.region->ambient_dim(), c.rows, seed);
    const double curv = bcg::curvature_estimate(f, *c.region, 40, seed);
    std::vector<bcg::BoundReport> reports;
    const double simp = bcg::simplicial_curvature_estimate(f, *c.region, 40, seed, &reports);
    CAPTURE(c.region->name());
    CHECK(curv >= 0.0);
    CHECK(simp > 0.0);
    CHECK(curv <= 2.0 * simp + 1e-6 * (1.0 + 2.0 * simp));
    for (const auto& r : reports) CHECK(r.satisfied);
    ++seed;
  }
}

TEST_CASE("curvature estimates grow monotonically with the sample count") {
  const auto f = random_quadratic(5, 8, 77);
  const bcg::Simplex region(5);
  const double small = bcg::curvature_estimate(f, region, 10, 3);
  const double large = bcg::curvature_estimate(f, region, 40, 3);
  CHECK(small <= large + 1e-15);
  CHECK(bcg::curvature_estimate(f, region, 40, 3) == large);
  CHECK_THROWS(bcg::curvature_estimate(f, region, 0, 3));
}

TEST_CASE("the simplex strong-convexity floor follows the support size") {
  CHECK(bcg::simplex_strong_convexity_floor(2.0, 8) == doctest::Approx(1.0));
  CHECK(bcg::simplex_strong_convexity_floor(0.5, 2) == doctest::Approx(1.0));
  CHECK_THROWS(bcg::simplex_strong_convexity_floor(1.0, 1));
}
