#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

namespace bcg {

// Family tag for vertex keys. Keys from different regions never compare
// equal even if the payload happens to coincide.
enum class AtomFamily : std::uint8_t {
  Coordinate,        // simplex vertex e_i, payload {i}
  SignedCoordinate,  // l1-ball vertex s * tau * e_i, payload {i, s}
  CubeCorner,        // 0/1 corner, payload = sorted indices of the 1-entries
  Permutation,       // Birkhoff vertex, payload = sigma(0..n-1), row-major
  ArcSet,            // DAG path, payload = sorted arc indices
  Generic,           // anything else (test helpers)
};

// Exact, hashable identity of a polytope vertex. Payload is integral so
// equality is never a floating-point question.
struct AtomKey {
  AtomFamily family = AtomFamily::Generic;
  std::vector<std::int32_t> data;

  friend bool operator==(const AtomKey& a, const AtomKey& b) {
    return a.family == b.family && a.data == b.data;
  }
};

struct AtomKeyHash {
  std::size_t operator()(const AtomKey& k) const noexcept {
    std::size_t h = static_cast<std::size_t>(k.family) * 0x9e3779b97f4a7c15ull;
    for (std::int32_t v : k.data) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) +
           (h >> 2);
    }
    return h;
  }
};

// A polytope vertex: structural key plus its dense coordinate view. The
// coordinates are materialized once when the atom is built and shared
// between copies, so copying atoms around active sets and caches is cheap.
class Atom {
 public:
  Atom(AtomKey key, Eigen::VectorXd coords)
      : key_(std::move(key)),
        coords_(std::make_shared<const Eigen::VectorXd>(std::move(coords))) {}

  const AtomKey& key() const { return key_; }
  const Eigen::VectorXd& coords() const { return *coords_; }
  Eigen::Index dim() const { return coords_->size(); }

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.key_ == b.key_;
  }

 private:
  AtomKey key_;
  std::shared_ptr<const Eigen::VectorXd> coords_;
};

}  // namespace bcg
