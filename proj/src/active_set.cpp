#include "bcg/active_set.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace bcg {

ActiveSet::ActiveSet(const Atom& start)
    : atoms_{start}, weights_(Eigen::VectorXd::Ones(1)), iterate_(start.coords()) {}

ActiveSet::ActiveSet(std::vector<Atom> atoms, Eigen::VectorXd weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.empty()) throw std::invalid_argument("ActiveSet: no atoms");
  if (weights_.size() != static_cast<Eigen::Index>(atoms_.size()))
    throw std::invalid_argument("ActiveSet: atom/weight size mismatch");
  for (Eigen::Index i = 0; i < weights_.size(); ++i)
    if (!(weights_[i] >= 0.0))
      throw std::invalid_argument("ActiveSet: negative weight");
  const double sum = weights_.sum();
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("ActiveSet: weights do not sum to one");
  weights_ /= sum;
  for (std::size_t i = 1; i < atoms_.size(); ++i)
    if (atoms_[i].dim() != atoms_[0].dim())
      throw std::invalid_argument("ActiveSet: dimension mismatch");
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    for (std::size_t j = i + 1; j < atoms_.size(); ++j)
      if (atoms_[i] == atoms_[j])
        throw std::invalid_argument("ActiveSet: duplicate atom");
  iterate_ = recompute_iterate();
}

int ActiveSet::find(const AtomKey& key) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i].key() == key) return static_cast<int>(i);
  return -1;
}

Eigen::VectorXd ActiveSet::recompute_iterate() const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(atoms_[0].dim());
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    x += weights_[static_cast<Eigen::Index>(i)] * atoms_[i].coords();
  return x;
}

void ActiveSet::prune(double tol) {
  std::vector<Atom> kept;
  std::vector<double> kw;
  kept.reserve(atoms_.size());
  kw.reserve(atoms_.size());
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const double w = weights_[static_cast<Eigen::Index>(i)];
    if (w > tol) {
      kept.push_back(atoms_[i]);
      kw.push_back(w);
    }
  }
  if (kept.empty())
    throw std::runtime_error("ActiveSet::prune: all weights at or below tolerance");
  double sum = 0.0;
  for (double w : kw) sum += w;
  atoms_ = std::move(kept);
  weights_.resize(static_cast<Eigen::Index>(kw.size()));
  for (std::size_t i = 0; i < kw.size(); ++i)
    weights_[static_cast<Eigen::Index>(i)] = kw[i] / sum;
}

LocalExtremes ActiveSet::local_extremes(const Eigen::VectorXd& grad) const {
  LocalExtremes ext;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const double v = grad.dot(atoms_[i].coords());
    if (ext.away_index < 0 || v > ext.away_value) {
      ext.away_index = static_cast<int>(i);
      ext.away_value = v;
    }
    if (ext.toward_index < 0 || v < ext.toward_value) {
      ext.toward_index = static_cast<int>(i);
      ext.toward_value = v;
    }
  }
  return ext;
}

void ActiveSet::step_toward(const Atom& v, double gamma) {
  weights_ *= (1.0 - gamma);
  const int idx = find(v.key());
  if (idx >= 0) {
    weights_[idx] += gamma;
  } else {
    atoms_.push_back(v);
    weights_.conservativeResize(weights_.size() + 1);
    weights_[weights_.size() - 1] = gamma;
  }
  iterate_ = (1.0 - gamma) * iterate_ + gamma * v.coords();
}

void ActiveSet::pairwise_shift(int away_index, const Atom& v, double gamma) {
  iterate_ += gamma * (v.coords() - atoms_[static_cast<std::size_t>(away_index)].coords());
  weights_[away_index] -= gamma;
  if (weights_[away_index] < 0.0) weights_[away_index] = 0.0;
  const int idx = find(v.key());
  if (idx >= 0) {
    weights_[idx] += gamma;
  } else {
    atoms_.push_back(v);
    weights_.conservativeResize(weights_.size() + 1);
    weights_[weights_.size() - 1] = gamma;
  }
}

void ActiveSet::away_shift(int away_index, double gamma) {
  iterate_ += gamma * (iterate_ - atoms_[static_cast<std::size_t>(away_index)].coords());
  weights_ *= (1.0 + gamma);
  weights_[away_index] -= gamma;
  if (weights_[away_index] < 0.0) weights_[away_index] = 0.0;
}

void ActiveSet::reset_to(const Atom& v) {
  atoms_ = {v};
  weights_ = Eigen::VectorXd::Ones(1);
  iterate_ = v.coords();
}

void ActiveSet::replace(std::vector<Atom> atoms, Eigen::VectorXd weights,
                        Eigen::VectorXd iterate) {
  if (atoms.empty()) throw std::invalid_argument("ActiveSet::replace: no atoms");
  atoms_ = std::move(atoms);
  weights_ = std::move(weights);
  iterate_ = std::move(iterate);
}

void ActiveSet::check_invariants() const {
  if (atoms_.empty()) throw std::runtime_error("ActiveSet: empty");
  for (Eigen::Index i = 0; i < weights_.size(); ++i)
    if (!(weights_[i] >= 0.0)) throw std::runtime_error("ActiveSet: negative weight");
  if (std::abs(weights_.sum() - 1.0) > kWeightSumTol)
    throw std::runtime_error("ActiveSet: weight sum drifted");
  const Eigen::VectorXd rec = recompute_iterate();
  const double scale = 1.0 + iterate_.cwiseAbs().maxCoeff();
  if ((rec - iterate_).cwiseAbs().maxCoeff() > kIterateRelTol * scale)
    throw std::runtime_error("ActiveSet: iterate inconsistent with weights");
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    for (std::size_t j = i + 1; j < atoms_.size(); ++j)
      if (atoms_[i] == atoms_[j]) throw std::runtime_error("ActiveSet: duplicate atom");
}

Eigen::VectorXd iterate_of(const ActiveSet& set) { return set.recompute_iterate(); }

ActiveSet prune(const ActiveSet& set, double tol) {
  ActiveSet copy = set;
  copy.prune(tol);
  return copy;
}

LocalExtremes local_extremes(const Eigen::VectorXd& grad, const ActiveSet& set) {
  return set.local_extremes(grad);
}

}  // namespace bcg
