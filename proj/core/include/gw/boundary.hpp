#pragma once

#include <string>
#include <vector>

#include "gw/operators.hpp"
#include "gw/parallel.hpp"

namespace gw {

enum class Verdict { trivial, non_trivial, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::trivial: return "trivial";
    case Verdict::non_trivial: return "non-trivial";
    default: return "inconclusive";
  }
}

enum class BoundaryMode { tail, cesaro, lazy };

inline const char* to_string(BoundaryMode m) {
  switch (m) {
    case BoundaryMode::tail: return "tail";
    case BoundaryMode::cesaro: return "cesaro";
    default: return "lazy";
  }
}

// Decay statistic d_n of a fibrewise chain: the largest total variation
// distance between n-step distributions started at two points of the fibre.
// Convexity makes this pairwise maximum equal the supremum over all starting
// distributions on the fibre, so it is exactly the 0-2-law statistic.
template <class S>
struct DecayProfile {
  ObjectId object = 0;
  std::vector<S> values;  // values[k] = d_{k+1}
  long horizon = 0;
  Verdict verdict = Verdict::inconclusive;
  double threshold = 1e-6;
};

template <class S>
struct FibrewiseReport {
  std::vector<DecayProfile<S>> per_object;
  S aggregate = scalar_traits<S>::zero();  // kappa-fraction of trivial fibres
  bool quasi_substationary = false;
  BoundaryMode mode = BoundaryMode::tail;
};

namespace detail {

template <class S>
S max_pairwise_tv(const std::vector<Measure<S>>& rows) {
  S best = scalar_traits<S>::zero();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      S d = total_variation(rows[i], rows[j]);
      if (d > best) best = d;
    }
  }
  return best;
}

// Verdict rule: trivial when the final value is below the threshold,
// non-trivial when the last quarter of the horizon has stabilized at the
// maximal value 2, inconclusive otherwise.
template <class S>
Verdict classify(const std::vector<S>& values, double threshold) {
  if (values.empty()) return Verdict::inconclusive;
  const S thr = scalar_traits<S>::from_double(threshold);
  if (values.back() <= thr) return Verdict::trivial;
  S two = scalar_traits<S>::from_ratio(2, 1);
  S floor = two;
  floor -= thr;
  const std::size_t window = (values.size() + 3) / 4;
  for (std::size_t i = values.size() - window; i < values.size(); ++i) {
    if (values[i] < floor) return Verdict::inconclusive;
  }
  return Verdict::non_trivial;
}

}  // namespace detail

// d_n for the plain powers P^n; detects tail triviality of the fibre chain
// over x. The statistic is non-increasing in n, so once it hits exact zero
// the remaining horizon is filled with zeros.
template <class S>
DecayProfile<S> tail_triviality_profile(const EquivariantOperator<S>& p, ObjectId x,
                                        long horizon, double threshold = 1e-6) {
  DecayProfile<S> out;
  out.object = x;
  out.horizon = horizon;
  out.threshold = threshold;
  const auto& fibre = p.groupoid().fibre(x);
  std::vector<Measure<S>> rows;
  rows.reserve(fibre.size());
  for (MorphismId m : fibre) rows.push_back(Measure<S>::point_mass(m));
  for (long n = 1; n <= horizon; ++n) {
    for (auto& row : rows) row = apply_measure(row, p);
    S d = detail::max_pairwise_tv(rows);
    out.values.push_back(d);
    if (d == 0) {
      out.values.resize(horizon, scalar_traits<S>::zero());
      break;
    }
  }
  out.verdict = detail::classify(out.values, threshold);
  return out;
}

// d_n for the Cesaro averages Q_n (cesaro mode) or for the powers of the
// aperiodic average R = (P + P^2)/2 (lazy mode); both detect exit
// triviality, i.e. the Liouville property of the fibre chain.
template <class S>
DecayProfile<S> exit_triviality_profile(const EquivariantOperator<S>& p, ObjectId x,
                                        long horizon, BoundaryMode mode,
                                        double threshold = 1e-6) {
  if (mode == BoundaryMode::tail) {
    return tail_triviality_profile(p, x, horizon, threshold);
  }
  DecayProfile<S> out;
  out.object = x;
  out.horizon = horizon;
  out.threshold = threshold;
  const auto& fibre = p.groupoid().fibre(x);

  if (mode == BoundaryMode::lazy) {
    const EquivariantOperator<S> r = lazy_average(p);
    std::vector<Measure<S>> rows;
    rows.reserve(fibre.size());
    for (MorphismId m : fibre) rows.push_back(Measure<S>::point_mass(m));
    for (long n = 1; n <= horizon; ++n) {
      for (auto& row : rows) row = apply_measure(row, r);
      S d = detail::max_pairwise_tv(rows);
      out.values.push_back(d);
      if (d == 0) {
        out.values.resize(horizon, scalar_traits<S>::zero());
        break;
      }
    }
  } else {
    // One power accumulator per fibre point: rows hold delta P^n, sums hold
    // delta (P + ... + P^n).
    std::vector<Measure<S>> rows, sums;
    rows.reserve(fibre.size());
    sums.resize(fibre.size());
    for (MorphismId m : fibre) rows.push_back(Measure<S>::point_mass(m));
    for (long n = 1; n <= horizon; ++n) {
      std::vector<Measure<S>> averaged(fibre.size());
      const S inv_n = scalar_traits<S>::from_ratio(1, n);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i] = apply_measure(rows[i], p);
        sums[i].add_scaled(rows[i], scalar_traits<S>::one());
        averaged[i] = sums[i].scaled(inv_n);
      }
      out.values.push_back(detail::max_pairwise_tv(averaged));
    }
  }
  out.verdict = detail::classify(out.values, threshold);
  return out;
}

// Runs the chosen profile on every object and aggregates the kappa-mass of
// the fibres with a trivial verdict. Also records the quasi-substationarity
// of the fibre counting measures (automatic here: transitions never leave
// the fibre, so one step of the chain stays dominated by counting measure)
// rather than assuming it.
template <class S>
FibrewiseReport<S> fibrewise_report(const EquivariantOperator<S>& p,
                                    const ObjectMeasure<S>& kappa, long horizon,
                                    BoundaryMode mode, double threshold = 1e-6) {
  const FiniteGroupoid& g = p.groupoid();
  FibrewiseReport<S> out;
  out.mode = mode;
  out.per_object.resize(g.object_count());
  parallel_for(static_cast<std::size_t>(g.object_count()), [&](std::size_t x) {
    out.per_object[x] = exit_triviality_profile(p, static_cast<ObjectId>(x),
                                                horizon, mode, threshold);
  });

  bool substationary = true;
  for (ObjectId x = 0; x < g.object_count(); ++x) {
    Measure<S> counting;
    for (MorphismId m : g.fibre(x)) counting.set(m, scalar_traits<S>::one());
    const Measure<S> stepped = apply_measure(counting, p);
    for (const auto& [m, v] : stepped.weights()) {
      if (!counting.contains(m)) substationary = false;
    }
  }
  out.quasi_substationary = substationary;

  const S total = kappa.total();
  if (total == 0) throw MeasureError("fibrewise report needs kappa with positive mass");
  S trivial_mass = scalar_traits<S>::zero();
  for (ObjectId x = 0; x < g.object_count(); ++x) {
    if (out.per_object[x].verdict == Verdict::trivial) trivial_mass += kappa.at(x);
  }
  out.aggregate = S(trivial_mass / total);
  return out;
}

}  // namespace gw
