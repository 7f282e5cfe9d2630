#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "gw/measure.hpp"

namespace gw {

using GroupoidPtr = std::shared_ptr<const FiniteGroupoid>;

class OperatorError : public std::runtime_error {
 public:
  explicit OperatorError(const std::string& what) : std::runtime_error(what) {}
};

// Equivariant Markov transition operator on a groupoid. The canonical datum
// is a target fibred probability system theta; the transition measure issued
// from a morphism m is the translate m . theta^{source(m)}, which lives on
// the target fibre of m. Equivariance of the transition family holds by
// construction, so only the system is stored.
template <class S>
class EquivariantOperator {
 public:
  struct Unchecked {};

  EquivariantOperator(GroupoidPtr g, FibredSystem<S> system,
                      const Tolerance& tol = {})
      : groupoid_(std::move(g)), system_(std::move(system)) {
    if (!is_probability_system(*groupoid_, system_, tol)) {
      throw OperatorError(
          "operator requires a target fibred probability system with "
          "non-empty fibre supports");
    }
  }

  EquivariantOperator(GroupoidPtr g, FibredSystem<S> system, Unchecked)
      : groupoid_(std::move(g)), system_(std::move(system)) {}

  static EquivariantOperator identity(GroupoidPtr g) {
    FibredSystem<S> sys = identity_system<S>(*g);
    return EquivariantOperator(std::move(g), std::move(sys), Unchecked{});
  }

  const FiniteGroupoid& groupoid() const { return *groupoid_; }
  const GroupoidPtr& groupoid_ptr() const { return groupoid_; }
  const FibredSystem<S>& system() const { return system_; }

  // Transition probability issued from m.
  Measure<S> transition(MorphismId m) const {
    return translate(*groupoid_, m, system_.at(groupoid_->source(m)));
  }

 private:
  GroupoidPtr groupoid_;
  FibredSystem<S> system_;
};

// One step of the chain seen from a measure: (alpha P)(c) = sum_m alpha(m)
// pi^m(c). Preserves total mass.
template <class S>
Measure<S> apply_measure(const Measure<S>& alpha, const EquivariantOperator<S>& p) {
  Measure<S> out;
  const FiniteGroupoid& g = p.groupoid();
  for (const auto& [m, w] : alpha.weights()) {
    for (const auto& [b, v] : p.system().at(g.source(m)).weights()) {
      S mass = w;
      mass *= v;
      out.add(g.compose(m, b), mass);
    }
  }
  return out;
}

// Dual action on functions over morphisms: (Pf)(m) = <f, pi^m>.
template <class S>
std::vector<S> apply_function(const EquivariantOperator<S>& p,
                              const std::vector<S>& f) {
  const FiniteGroupoid& g = p.groupoid();
  std::vector<S> out(g.morphism_count(), scalar_traits<S>::zero());
  for (MorphismId m = 0; m < g.morphism_count(); ++m) {
    S sum = scalar_traits<S>::zero();
    for (const auto& [b, v] : p.system().at(g.source(m)).weights()) {
      S term = v;
      term *= f[g.compose(m, b)];
      sum += term;
    }
    out[m] = sum;
  }
  return out;
}

template <class S>
EquivariantOperator<S> compose_operators(const EquivariantOperator<S>& p,
                                         const EquivariantOperator<S>& q) {
  if (&p.groupoid() != &q.groupoid()) {
    throw OperatorError("cannot compose operators over different groupoids");
  }
  return EquivariantOperator<S>(
      p.groupoid_ptr(), convolve(p.groupoid(), p.system(), q.system()),
      typename EquivariantOperator<S>::Unchecked{});
}

// P^n by repeated squaring; n = 0 yields the identity-system operator.
template <class S>
EquivariantOperator<S> power(const EquivariantOperator<S>& p, long n) {
  if (n < 0) throw OperatorError("negative operator power");
  EquivariantOperator<S> acc = EquivariantOperator<S>::identity(p.groupoid_ptr());
  EquivariantOperator<S> base = p;
  while (n > 0) {
    if (n & 1) acc = compose_operators(acc, base);
    n >>= 1;
    if (n > 0) base = compose_operators(base, base);
  }
  return acc;
}

// Convex combination of operators, realized on their systems.
template <class S>
EquivariantOperator<S> convex_combination(
    const std::vector<std::pair<S, EquivariantOperator<S>>>& terms) {
  if (terms.empty()) throw OperatorError("empty convex combination");
  const GroupoidPtr& g = terms.front().second.groupoid_ptr();
  FibredSystem<S> sys(g->object_count());
  for (const auto& [w, op] : terms) {
    if (op.groupoid_ptr().get() != g.get()) {
      throw OperatorError("convex combination across different groupoids");
    }
    add_system_scaled(sys, op.system(), w);
  }
  return EquivariantOperator<S>(g, std::move(sys),
                                typename EquivariantOperator<S>::Unchecked{});
}

// Cesaro average (P + P^2 + ... + P^n) / n.
template <class S>
EquivariantOperator<S> cesaro(const EquivariantOperator<S>& p, long n) {
  if (n < 1) throw OperatorError("cesaro average needs n >= 1");
  const S weight = scalar_traits<S>::from_ratio(1, n);
  FibredSystem<S> sys(p.groupoid().object_count());
  EquivariantOperator<S> pk = p;
  add_system_scaled(sys, pk.system(), weight);
  for (long k = 2; k <= n; ++k) {
    pk = compose_operators(pk, p);
    add_system_scaled(sys, pk.system(), weight);
  }
  return EquivariantOperator<S>(p.groupoid_ptr(), std::move(sys),
                                typename EquivariantOperator<S>::Unchecked{});
}

// The aperiodic average (P + P^2) / 2, whose power sequence detects exit
// triviality of P.
template <class S>
EquivariantOperator<S> lazy_average(const EquivariantOperator<S>& p) {
  return cesaro(p, 2);
}

// Discrepancy at a morphism: total variation between the transition issued
// from m and the one issued from the unit of its target fibre. Zero at units;
// at most 2 everywhere.
template <class S>
S discrepancy_at(MorphismId m, const EquivariantOperator<S>& p) {
  const FiniteGroupoid& g = p.groupoid();
  if (g.is_unit(m)) return scalar_traits<S>::zero();
  return total_variation(p.transition(m), p.system().at(g.target(m)));
}

// All discrepancies at once; index is the morphism id.
template <class S>
std::vector<S> discrepancy_profile(const EquivariantOperator<S>& p) {
  std::vector<S> out(p.groupoid().morphism_count());
  for (MorphismId m = 0; m < p.groupoid().morphism_count(); ++m) {
    out[m] = discrepancy_at(m, p);
  }
  return out;
}

// Mean discrepancy against a probability measure m on the groupoid.
template <class S>
S mean_discrepancy(const Measure<S>& m, const EquivariantOperator<S>& p,
                   const Tolerance& tol = {}) {
  if (!is_probability(m, tol)) {
    throw OperatorError("mean discrepancy requires a probability measure");
  }
  S sum = scalar_traits<S>::zero();
  for (const auto& [mor, w] : m.weights()) {
    S term = w;
    term *= discrepancy_at(mor, p);
    sum += term;
  }
  return sum;
}

// Mean discrepancy given a precomputed per-morphism discrepancy profile.
template <class S>
S mean_discrepancy_with_profile(const Measure<S>& m, const std::vector<S>& profile) {
  S sum = scalar_traits<S>::zero();
  for (const auto& [mor, w] : m.weights()) {
    S term = w;
    term *= profile[mor];
    sum += term;
  }
  return sum;
}

// Image of a measure under the target map followed by the unit inclusion:
// all mass moves to the unit of its target fibre.
template <class S>
Measure<S> target_pushforward(const FiniteGroupoid& g, const Measure<S>& m) {
  Measure<S> out;
  for (const auto& [mor, w] : m.weights()) out.add(g.unit(g.target(mor)), w);
  return out;
}

// A system is exactly invariant when every translate of a source-fibre
// measure reproduces the target-fibre measure; equivalently the discrepancy
// function vanishes identically.
template <class S>
bool is_exactly_invariant(const EquivariantOperator<S>& p) {
  return is_left_invariant(p.groupoid(), p.system(), Tolerance{0.0});
}

// Row-stochastic matrix of the chain restricted to one target fibre. Rows
// and columns are indexed by the fibre list of x (unit first).
template <class S>
struct FibreMatrix {
  ObjectId object = 0;
  std::vector<MorphismId> index;
  std::vector<S> data;  // row-major, size index.size()^2

  std::size_t size() const { return index.size(); }
  const S& at(std::size_t row, std::size_t col) const {
    return data[row * index.size() + col];
  }
  S& at(std::size_t row, std::size_t col) { return data[row * index.size() + col]; }
};

template <class S>
FibreMatrix<S> fibre_matrix(const EquivariantOperator<S>& p, ObjectId x) {
  const FiniteGroupoid& g = p.groupoid();
  FibreMatrix<S> out;
  out.object = x;
  out.index = g.fibre(x);
  const std::size_t n = out.index.size();
  out.data.assign(n * n, scalar_traits<S>::zero());
  for (std::size_t row = 0; row < n; ++row) {
    const Measure<S> pi = p.transition(out.index[row]);
    for (const auto& [m, v] : pi.weights()) {
      out.at(row, static_cast<std::size_t>(g.fibre_index(m))) = v;
    }
  }
  return out;
}

}  // namespace gw
