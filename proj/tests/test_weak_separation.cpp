#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "bcg/rng.hpp"
#include "bcg/weak_separation.hpp"

namespace {

Eigen::VectorXd gaussian(Eigen::Index n, bcg::Rng& rng) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

}  // namespace

TEST_CASE("vertex cache stores atoms once and evicts oldest at capacity") {
  const bcg::Simplex simplex(5);
  bcg::VertexCache cache;
  CHECK(cache.insert(simplex.vertex(0)));
  CHECK_FALSE(cache.insert(simplex.vertex(0)));
  CHECK(cache.insert(simplex.vertex(1)));
  CHECK(cache.size() == 2);
  CHECK(cache.contains(simplex.vertex(0).key()));

  bcg::VertexCache capped(std::optional<std::size_t>{2});
  capped.insert(simplex.vertex(0));
  capped.insert(simplex.vertex(1));
  capped.insert(simplex.vertex(2));
  CHECK(capped.size() == 2);
  CHECK_FALSE(capped.contains(simplex.vertex(0).key()));  // oldest evicted
  CHECK(capped.contains(simplex.vertex(1).key()));
  CHECK(capped.contains(simplex.vertex(2).key()));

  CHECK_THROWS(bcg::VertexCache(std::optional<std::size_t>{0}));
}

TEST_CASE("weak separation prefers active atoms over the oracle") {
  const bcg::Simplex simplex(4);
  bcg::VertexCache cache;
  Eigen::VectorXd c(4);
  c << 0.0, -1.0, -2.0, -5.0;
  Eigen::VectorXd x(4);
  x << 1.0, 0.0, 0.0, 0.0;  // gap against vertex 1 is 1, vertex 2 is 2

  // Vertex 1 already satisfies the threshold, so the scan stops there even
  // though vertex 3 would be better.
  const std::vector<bcg::Atom> active = {simplex.vertex(0), simplex.vertex(1), simplex.vertex(2)};
  const auto out = bcg::weak_separation(simplex, cache, active, c, x, 1.0, 1.0);
  CHECK(out.kind == bcg::SeparationKind::Positive);
  REQUIRE(out.atom.has_value());
  CHECK(out.atom->key().data == std::vector<std::int32_t>{1});
  CHECK(out.improvement == doctest::Approx(1.0));
  CHECK(cache.lmo_calls == 0);
  CHECK(cache.cache_hits == 1);
}

TEST_CASE("weak separation falls back to the oracle and caches the vertex") {
  const bcg::Simplex simplex(4);
  bcg::VertexCache cache;
  Eigen::VectorXd c(4);
  c << 0.0, -1.0, -2.0, -5.0;
  Eigen::VectorXd x(4);
  x << 1.0, 0.0, 0.0, 0.0;

  const std::vector<bcg::Atom> active = {simplex.vertex(0)};
  const auto out = bcg::weak_separation(simplex, cache, active, c, x, 4.0, 1.0);
  CHECK(out.kind == bcg::SeparationKind::Positive);
  CHECK(out.atom->key().data == std::vector<std::int32_t>{3});
  CHECK(out.improvement == doctest::Approx(5.0));
  CHECK(cache.lmo_calls == 1);
  CHECK(cache.contains(out.atom->key()));

  // The same query now resolves from the cache without an oracle call.
  const auto again = bcg::weak_separation(simplex, cache, active, c, x, 4.0, 1.0);
  CHECK(again.kind == bcg::SeparationKind::Positive);
  CHECK(cache.lmo_calls == 1);
  CHECK(cache.cache_hits == 1);
}

TEST_CASE("negative answers certify the exact gap and still cache the vertex") {
  const bcg::Simplex simplex(4);
  bcg::VertexCache cache;
  Eigen::VectorXd c(4);
  c << 0.0, -1.0, -2.0, -5.0;
  Eigen::VectorXd x(4);
  x << 1.0, 0.0, 0.0, 0.0;

  // True gap is 5; a threshold of 10/1 cannot be met.
  const std::vector<bcg::Atom> active = {simplex.vertex(0)};
  const auto out = bcg::weak_separation(simplex, cache, active, c, x, 10.0, 1.0);
  CHECK(out.kind == bcg::SeparationKind::Negative);
  CHECK(out.true_gap == doctest::Approx(5.0));
  CHECK(cache.lmo_calls == 1);
  CHECK(cache.contains(simplex.vertex(3).key()));
}

TEST_CASE("the K factor loosens the acceptance threshold") {
  const bcg::Simplex simplex(4);
  bcg::VertexCache cache;
  Eigen::VectorXd c(4);
  c << 0.0, -1.0, -2.0, -5.0;
  Eigen::VectorXd x(4);
  x << 1.0, 0.0, 0.0, 0.0;

  // Needs gain >= 8/4 = 2: the active scan reaches vertex 2.
  const std::vector<bcg::Atom> active = {simplex.vertex(1), simplex.vertex(2)};
  const auto out = bcg::weak_separation(simplex, cache, active, c, x, 8.0, 4.0);
  CHECK(out.kind == bcg::SeparationKind::Positive);
  CHECK(out.atom->key().data == std::vector<std::int32_t>{2});
}

TEST_CASE("randomized separation answers are always certified") {
  bcg::Rng rng(99);
  const bcg::Simplex simplex(6);
  const bcg::Cube cube(5);
  const bcg::L1Ball ball(5, 2.0);
  const std::vector<const bcg::Region*> regions = {&simplex, &cube, &ball};

  int positives = 0;
  int negatives = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const bcg::Region& region = *regions[static_cast<std::size_t>(trial % 3)];
    bcg::VertexCache cache;
    std::vector<bcg::Atom> active;
    const int count = 1 + static_cast<int>(rng.uniform_int(4));
    for (int i = 0; i < count; ++i) active.push_back(region.lmo(gaussian(region.ambient_dim(), rng)));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(region.ambient_dim());
    Eigen::VectorXd w(count);
    for (int i = 0; i < count; ++i) w[i] = rng.uniform01() + 1e-3;
    w /= w.sum();
    for (int i = 0; i < count; ++i) x += w[i] * active[static_cast<std::size_t>(i)].coords();

    const Eigen::VectorXd c = gaussian(region.ambient_dim(), rng);
    const double phi = std::pow(10.0, rng.uniform(-4.0, 0.5));
    const double K = trial % 2 == 0 ? 1.0 : 2.0;
    const auto out = bcg::weak_separation(region, cache, active, c, x, phi, K);
    const double cx = c.dot(x);
    if (out.kind == bcg::SeparationKind::Positive) {
      ++positives;
      REQUIRE(out.atom.has_value());
      CHECK(cx - c.dot(out.atom->coords()) >= phi / K);
    } else {
      ++negatives;
      const bcg::Atom best = region.lmo(c);
      CHECK(cx - c.dot(best.coords()) < phi / K);
      CHECK(out.true_gap == doctest::Approx(std::max(0.0, cx - c.dot(best.coords()))));
    }
  }
  CHECK(positives > 0);
  CHECK(negatives > 0);
}
