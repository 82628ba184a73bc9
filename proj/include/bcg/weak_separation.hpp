#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "bcg/region.hpp"

namespace bcg {

// Insertion-ordered vertex store with key lookup, shared by every lazified
// solver in a run. Also owns the run's oracle-call and cache-hit counters.
// An optional capacity evicts the oldest atoms first.
class VertexCache {
 public:
  VertexCache() = default;
  explicit VertexCache(std::optional<std::size_t> cap);

  // No-op when the key is already stored. Returns true on insertion.
  bool insert(const Atom& a);
  bool contains(const AtomKey& key) const { return index_.count(key) != 0; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  std::uint64_t lmo_calls = 0;
  std::uint64_t cache_hits = 0;

 private:
  std::vector<Atom> atoms_;
  std::unordered_map<AtomKey, std::size_t, AtomKeyHash> index_;
  std::optional<std::size_t> cap_;
};

enum class SeparationKind { Positive, Negative };

struct SeparationOutcome {
  SeparationKind kind = SeparationKind::Negative;
  std::optional<Atom> atom;  // improving vertex when Positive
  double improvement = 0.0;  // <c, x - y> at the returned or oracle vertex
  double true_gap = 0.0;     // exact gap certificate when Negative, >= 0
};

// Weak separation: any vertex y with <c, x - y> >= phi / K qualifies.
// Scans the active atoms in order, then the cache in insertion order
// (either hit bumps cache_hits); falls back to one exact oracle call
// (bumps lmo_calls). The oracle vertex is cached on both outcomes, so a
// Negative answer still primes later rounds. Negative carries the exact
// dual gap <c, x - y*>, clamped at zero against rounding.
SeparationOutcome weak_separation(const Region& region, VertexCache& cache,
                                  const std::vector<Atom>& active, const Eigen::VectorXd& c,
                                  const Eigen::VectorXd& x, double phi, double K);

}  // namespace bcg
