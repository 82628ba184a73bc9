#include "bcg/weak_separation.hpp"

#include <algorithm>
#include <stdexcept>

namespace bcg {

VertexCache::VertexCache(std::optional<std::size_t> cap) : cap_(cap) {
  if (cap_ && *cap_ == 0) throw std::invalid_argument("VertexCache: cap must be positive");
}

bool VertexCache::insert(const Atom& a) {
  if (index_.count(a.key())) return false;
  if (cap_ && atoms_.size() == *cap_) {
    index_.erase(atoms_.front().key());
    atoms_.erase(atoms_.begin());
    for (auto& [key, pos] : index_) --pos;
  }
  index_.emplace(a.key(), atoms_.size());
  atoms_.push_back(a);
  return true;
}

SeparationOutcome weak_separation(const Region& region, VertexCache& cache,
                                  const std::vector<Atom>& active, const Eigen::VectorXd& c,
                                  const Eigen::VectorXd& x, double phi, double K) {
  if (c.size() != x.size() || c.size() != region.ambient_dim())
    throw std::invalid_argument("weak_separation: dimension mismatch");
  const double threshold = phi / K;
  const double cx = c.dot(x);
  const auto gain = [&](const Atom& a) { return cx - c.dot(a.coords()); };

  for (const Atom& a : active) {
    const double g = gain(a);
    if (g >= threshold) {
      ++cache.cache_hits;
      return {SeparationKind::Positive, a, g, 0.0};
    }
  }
  for (const Atom& a : cache.atoms()) {
    const double g = gain(a);
    if (g >= threshold) {
      ++cache.cache_hits;
      return {SeparationKind::Positive, a, g, 0.0};
    }
  }

  ++cache.lmo_calls;
  Atom v = region.lmo(c);
  cache.insert(v);
  const double g = gain(v);
  if (g >= threshold) return {SeparationKind::Positive, std::move(v), g, 0.0};
  return {SeparationKind::Negative, std::nullopt, g, std::max(0.0, g)};
}

}  // namespace bcg
