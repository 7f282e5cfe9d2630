#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gw/groupoid.hpp"
#include "gw/scalar.hpp"

namespace gw {

class MeasureError : public std::runtime_error {
 public:
  explicit MeasureError(const std::string& what) : std::runtime_error(what) {}
};

// Sparse measure on an arbitrary key space: only the support is stored.
// Keys are kept sorted so iteration order is deterministic. The container is
// also used for signed differences internally; operations whose contract
// needs non-negative or probability measures validate at the call site.
template <class Key, class S>
class SparseMeasure {
 public:
  using map_type = std::map<Key, S>;

  SparseMeasure() = default;

  static SparseMeasure point_mass(const Key& k) {
    SparseMeasure m;
    m.weights_[k] = scalar_traits<S>::one();
    return m;
  }

  void add(const Key& k, const S& mass) {
    if (mass == 0) return;
    auto [it, inserted] = weights_.try_emplace(k, mass);
    if (!inserted) {
      it->second += mass;
      if (it->second == 0) weights_.erase(it);
    }
  }

  void set(const Key& k, const S& mass) {
    if (mass == 0) {
      weights_.erase(k);
    } else {
      weights_[k] = mass;
    }
  }

  S at(const Key& k) const {
    auto it = weights_.find(k);
    return it == weights_.end() ? scalar_traits<S>::zero() : it->second;
  }

  bool contains(const Key& k) const { return weights_.count(k) > 0; }
  std::size_t support_size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }
  const map_type& weights() const { return weights_; }

  S total() const {
    S sum = scalar_traits<S>::zero();
    for (const auto& [k, v] : weights_) sum += v;
    return sum;
  }

  bool nonnegative() const {
    for (const auto& [k, v] : weights_) {
      if (v < 0) return false;
    }
    return true;
  }

  SparseMeasure scaled(const S& c) const {
    SparseMeasure out;
    if (c == 0) return out;
    for (const auto& [k, v] : weights_) {
      S m = v;
      m *= c;
      out.weights_[k] = m;
    }
    return out;
  }

  SparseMeasure normalized() const {
    const S mass = total();
    if (mass == 0) throw MeasureError("cannot normalize a zero measure");
    SparseMeasure out;
    for (const auto& [k, v] : weights_) out.weights_[k] = S(v / mass);
    return out;
  }

  void add_scaled(const SparseMeasure& other, const S& c) {
    if (c == 0) return;
    for (const auto& [k, v] : other.weights_) {
      S m = v;
      m *= c;
      add(k, m);
    }
  }

  friend bool operator==(const SparseMeasure& a, const SparseMeasure& b) {
    return a.weights_ == b.weights_;
  }

 private:
  map_type weights_;
};

// Total variation distance sum_k |a(k) - b(k)|; in [0, 2] for probabilities.
template <class Key, class S>
S total_variation(const SparseMeasure<Key, S>& a, const SparseMeasure<Key, S>& b) {
  S sum = scalar_traits<S>::zero();
  auto ia = a.weights().begin();
  auto ib = b.weights().begin();
  while (ia != a.weights().end() || ib != b.weights().end()) {
    if (ib == b.weights().end() || (ia != a.weights().end() && ia->first < ib->first)) {
      sum += scalar_traits<S>::abs(ia->second);
      ++ia;
    } else if (ia == a.weights().end() || ib->first < ia->first) {
      sum += scalar_traits<S>::abs(ib->second);
      ++ib;
    } else {
      S d = ia->second;
      d -= ib->second;
      sum += scalar_traits<S>::abs(d);
      ++ia;
      ++ib;
    }
  }
  return sum;
}

template <class Key, class S>
bool measures_equal(const SparseMeasure<Key, S>& a, const SparseMeasure<Key, S>& b,
                    const Tolerance& tol = {}) {
  if constexpr (scalar_traits<S>::exact) {
    return a == b;
  } else {
    return scalar_traits<S>::to_double(total_variation(a, b)) <= tol.epsilon;
  }
}

template <class Key, class S>
bool is_probability(const SparseMeasure<Key, S>& m, const Tolerance& tol = {}) {
  return m.nonnegative() &&
         scalar_traits<S>::equal(m.total(), scalar_traits<S>::one(), tol);
}

// Measures on the morphism set of a groupoid.
template <class S>
using Measure = SparseMeasure<MorphismId, S>;

// Non-negative weights on the object set (kappa lives here).
template <class S>
class ObjectMeasure {
 public:
  ObjectMeasure() = default;
  explicit ObjectMeasure(std::vector<S> weights) : weights_(std::move(weights)) {}

  static ObjectMeasure uniform(int object_count) {
    return ObjectMeasure(
        std::vector<S>(object_count, scalar_traits<S>::from_ratio(1, object_count)));
  }

  int size() const { return static_cast<int>(weights_.size()); }
  const S& at(ObjectId x) const { return weights_[x]; }
  void set(ObjectId x, const S& v) { weights_[x] = v; }

  S total() const {
    S sum = scalar_traits<S>::zero();
    for (const auto& v : weights_) sum += v;
    return sum;
  }

 private:
  std::vector<S> weights_;
};

// One measure per target fibre, indexed by object.
template <class S>
class FibredSystem {
 public:
  FibredSystem() = default;
  explicit FibredSystem(int object_count) : per_fibre_(object_count) {}
  explicit FibredSystem(std::vector<Measure<S>> per_fibre)
      : per_fibre_(std::move(per_fibre)) {}

  int size() const { return static_cast<int>(per_fibre_.size()); }
  const Measure<S>& at(ObjectId x) const { return per_fibre_[x]; }
  Measure<S>& at(ObjectId x) { return per_fibre_[x]; }

  friend bool operator==(const FibredSystem& a, const FibredSystem& b) {
    return a.per_fibre_ == b.per_fibre_;
  }

 private:
  std::vector<Measure<S>> per_fibre_;
};

template <class S>
bool is_target_fibred(const FiniteGroupoid& g, const FibredSystem<S>& sys) {
  if (sys.size() != g.object_count()) return false;
  for (ObjectId x = 0; x < g.object_count(); ++x) {
    for (const auto& [m, v] : sys.at(x).weights()) {
      if (m < 0 || m >= g.morphism_count() || g.target(m) != x) return false;
    }
  }
  return true;
}

// A probability system has, on every fibre, a non-negative measure of total
// mass one with non-empty support.
template <class S>
bool is_probability_system(const FiniteGroupoid& g, const FibredSystem<S>& sys,
                           const Tolerance& tol = {}) {
  if (!is_target_fibred(g, sys)) return false;
  for (ObjectId x = 0; x < g.object_count(); ++x) {
    if (sys.at(x).empty() || !is_probability(sys.at(x), tol)) return false;
  }
  return true;
}

// Counting measure on every target fibre; the canonical finite Haar system.
template <class S>
FibredSystem<S> counting_haar(const FiniteGroupoid& g) {
  FibredSystem<S> sys(g.object_count());
  for (ObjectId x = 0; x < g.object_count(); ++x) {
    for (MorphismId m : g.fibre(x)) sys.at(x).set(m, scalar_traits<S>::one());
  }
  return sys;
}

// System assigning the point mass at the unit to every fibre; the identity
// for convolution.
template <class S>
FibredSystem<S> identity_system(const FiniteGroupoid& g) {
  FibredSystem<S> sys(g.object_count());
  for (ObjectId x = 0; x < g.object_count(); ++x) {
    sys.at(x).set(g.unit(x), scalar_traits<S>::one());
  }
  return sys;
}

// Uniform probability on every fibre; exactly invariant under translation.
template <class S>
FibredSystem<S> uniform_system(const FiniteGroupoid& g) {
  FibredSystem<S> sys(g.object_count());
  for (ObjectId x = 0; x < g.object_count(); ++x) {
    const auto& f = g.fibre(x);
    const S w = scalar_traits<S>::from_ratio(1, static_cast<long long>(f.size()));
    for (MorphismId m : f) sys.at(x).set(m, w);
  }
  return sys;
}

// Integrates fibre measures against the object measure kappa: the morphism
// m gets mass lambda^{target(m)}(m) * kappa(target(m)).
template <class S>
Measure<S> lambda_star_kappa(const FiniteGroupoid& g, const FibredSystem<S>& lambda,
                             const ObjectMeasure<S>& kappa) {
  Measure<S> out;
  for (ObjectId x = 0; x < g.object_count(); ++x) {
    const S& kx = kappa.at(x);
    if (kx == 0) continue;
    for (const auto& [m, v] : lambda.at(x).weights()) {
      S mass = v;
      mass *= kx;
      out.add(m, mass);
    }
  }
  return out;
}

// Push-forward of mu under left multiplication by m; requires the support of
// mu to sit inside the source fibre of m. Total mass is preserved.
template <class S>
Measure<S> translate(const FiniteGroupoid& g, MorphismId m, const Measure<S>& mu) {
  Measure<S> out;
  for (const auto& [b, v] : mu.weights()) {
    if (g.target(b) != g.source(m)) {
      throw MeasureError("translate: morphism " + std::to_string(b) +
                         " in support lies outside the source fibre of " +
                         std::to_string(m));
    }
    out.add(g.compose(m, b), v);
  }
  return out;
}

// Convolution of target fibred systems: on each fibre, the mixture of
// translates (theta * eta)^x = sum_b theta^x(b) * (b . eta^{source(b)}).
// This is the system of the product of the associated transition operators.
template <class S>
FibredSystem<S> convolve(const FiniteGroupoid& g, const FibredSystem<S>& theta,
                         const FibredSystem<S>& eta) {
  FibredSystem<S> out(g.object_count());
  for (ObjectId x = 0; x < g.object_count(); ++x) {
    auto& target = out.at(x);
    for (const auto& [b, w] : theta.at(x).weights()) {
      for (const auto& [c, v] : eta.at(g.source(b)).weights()) {
        S mass = w;
        mass *= v;
        target.add(g.compose(b, c), mass);
      }
    }
  }
  return out;
}

template <class S>
FibredSystem<S> scale_system(const FibredSystem<S>& sys, const S& c) {
  FibredSystem<S> out(sys.size());
  for (ObjectId x = 0; x < sys.size(); ++x) out.at(x) = sys.at(x).scaled(c);
  return out;
}

template <class S>
void add_system_scaled(FibredSystem<S>& into, const FibredSystem<S>& other,
                       const S& c) {
  for (ObjectId x = 0; x < into.size(); ++x) into.at(x).add_scaled(other.at(x), c);
}

// Left invariance of a fibred system: translating the source-fibre measure by
// any morphism reproduces the target-fibre measure.
template <class S>
bool is_left_invariant(const FiniteGroupoid& g, const FibredSystem<S>& sys,
                       const Tolerance& tol = {}) {
  for (MorphismId m = 0; m < g.morphism_count(); ++m) {
    if (!measures_equal(translate(g, m, sys.at(g.source(m))), sys.at(g.target(m)),
                        tol)) {
      return false;
    }
  }
  return true;
}

// Kappa is quasi-invariant when the null set of lambda * kappa is stable
// under morphism inversion.
template <class S>
bool check_quasi_invariance(const FiniteGroupoid& g, const FibredSystem<S>& lambda,
                            const ObjectMeasure<S>& kappa) {
  const Measure<S> mu = lambda_star_kappa(g, lambda, kappa);
  for (MorphismId m = 0; m < g.morphism_count(); ++m) {
    const bool null_here = mu.at(m) == 0;
    const bool null_inverse = mu.at(g.inverse(m)) == 0;
    if (null_here != null_inverse) return false;
  }
  return true;
}

// Default reference probability measure: the normalization of the counting
// Haar system integrated against kappa.
template <class S>
Measure<S> reference_measure(const FiniteGroupoid& g, const ObjectMeasure<S>& kappa) {
  return lambda_star_kappa(g, counting_haar<S>(g), kappa).normalized();
}

template <class S>
Measure<S> reference_measure(const FiniteGroupoid& g) {
  return reference_measure(g, ObjectMeasure<S>::uniform(g.object_count()));
}

}  // namespace gw
