#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gw/measure.hpp"
#include "gw/scalar.hpp"

namespace gw {

class GroupWalkError : public std::runtime_error {
 public:
  explicit GroupWalkError(const std::string& what) : std::runtime_error(what) {}
};

// The infinite cyclic group Z; elements are integers.
struct IntegerGroup {
  using Elem = long long;
  static Elem identity() { return 0; }
  static Elem multiply(Elem a, Elem b) { return a + b; }
  static Elem invert(Elem a) { return -a; }
  static Elem canonicalize(Elem a) { return a; }
  static std::string format(Elem a) { return std::to_string(a); }
};

// The cyclic group Z_n; elements are residues 0..n-1.
struct CyclicGroup {
  using Elem = int;
  explicit CyclicGroup(int order) : order(order) {
    if (order < 1) throw GroupWalkError("cyclic group order must be positive");
  }
  int order;
  Elem identity() const { return 0; }
  Elem multiply(Elem a, Elem b) const { return (a + b) % order; }
  Elem invert(Elem a) const { return (order - a % order) % order; }
  Elem canonicalize(Elem a) const { return ((a % order) + order) % order; }
  std::string format(Elem a) const { return std::to_string(a); }

  std::vector<std::vector<int>> table() const {
    std::vector<std::vector<int>> t(order, std::vector<int>(order));
    for (int a = 0; a < order; ++a) {
      for (int b = 0; b < order; ++b) t[a][b] = (a + b) % order;
    }
    return t;
  }
};

// The free group on two generators a, b. Elements are freely reduced words
// over 'a', 'b' with 'A', 'B' as the inverse letters; reduction is the
// normal form, so equality of elements is string equality.
struct FreeGroup2 {
  using Elem = std::string;

  static char invert_letter(char c) {
    switch (c) {
      case 'a': return 'A';
      case 'A': return 'a';
      case 'b': return 'B';
      case 'B': return 'b';
      default: throw GroupWalkError(std::string("invalid generator letter '") + c + "'");
    }
  }

  static Elem identity() { return {}; }

  static Elem canonicalize(const Elem& w) {
    Elem out;
    out.reserve(w.size());
    for (char c : w) {
      const char inv = invert_letter(c);  // validates the letter
      if (!out.empty() && out.back() == inv) {
        out.pop_back();
      } else {
        out.push_back(c);
      }
    }
    return out;
  }

  static Elem multiply(const Elem& a, const Elem& b) {
    Elem out = a;
    for (char c : b) {
      if (!out.empty() && out.back() == invert_letter(c)) {
        out.pop_back();
      } else {
        out.push_back(c);
      }
    }
    return out;
  }

  static Elem invert(const Elem& a) {
    Elem out;
    out.reserve(a.size());
    for (auto it = a.rbegin(); it != a.rend(); ++it) out.push_back(invert_letter(*it));
    return out;
  }

  static std::string format(const Elem& a) { return a.empty() ? "e" : a; }

  // All reduced words of length at most radius.
  static std::vector<Elem> ball(int radius) {
    std::vector<Elem> out{identity()};
    std::vector<Elem> sphere{identity()};
    const std::string letters = "aAbB";
    for (int r = 1; r <= radius; ++r) {
      std::vector<Elem> next;
      for (const auto& w : sphere) {
        for (char c : letters) {
          if (!w.empty() && w.back() == invert_letter(c)) continue;
          Elem grown = w;
          grown.push_back(c);
          next.push_back(std::move(grown));
        }
      }
      out.insert(out.end(), next.begin(), next.end());
      sphere = std::move(next);
    }
    return out;
  }
};

template <class Group, class S>
using GroupMeasure = SparseMeasure<typename Group::Elem, S>;

// Push-forward of mu under left multiplication by g.
template <class Group, class S>
GroupMeasure<Group, S> left_translate(const typename Group::Elem& g,
                                      const GroupMeasure<Group, S>& mu,
                                      const Group& group) {
  GroupMeasure<Group, S> out;
  for (const auto& [h, v] : mu.weights()) out.add(group.multiply(g, h), v);
  return out;
}

// Group convolution (mu * nu)(g) = sum_h mu(h) nu(h^{-1} g), realized as the
// mixture of left translates of nu by the support of mu.
template <class Group, class S>
GroupMeasure<Group, S> group_convolve(const GroupMeasure<Group, S>& mu,
                                      const GroupMeasure<Group, S>& nu,
                                      const Group& group) {
  GroupMeasure<Group, S> out;
  for (const auto& [h, w] : mu.weights()) {
    for (const auto& [k, v] : nu.weights()) {
      S mass = w;
      mass *= v;
      out.add(group.multiply(h, k), mass);
    }
  }
  return out;
}

// Mean discrepancy of a step distribution theta against a reference measure:
// the average over g ~ ref of the total variation between g.theta and theta.
// This is the one-object specialization of the groupoid discrepancy.
template <class Group, class S>
S group_discrepancy(const GroupMeasure<Group, S>& ref,
                    const GroupMeasure<Group, S>& theta, const Group& group,
                    const Tolerance& tol = {}) {
  if (!is_probability(ref, tol) || !is_probability(theta, tol)) {
    throw GroupWalkError("group discrepancy requires probability measures");
  }
  S sum = scalar_traits<S>::zero();
  for (const auto& [g, w] : ref.weights()) {
    S term = w;
    term *= total_variation(left_translate(g, theta, group), theta);
    sum += term;
  }
  return sum;
}

template <class Group, class S>
GroupMeasure<Group, S> uniform_on(const std::vector<typename Group::Elem>& set,
                                  const Group& group) {
  if (set.empty()) throw GroupWalkError("uniform measure on an empty set");
  GroupMeasure<Group, S> out;
  const S w = scalar_traits<S>::from_ratio(1, static_cast<long long>(set.size()));
  for (const auto& e : set) out.add(group.canonicalize(e), w);
  if (out.support_size() != set.size()) {
    throw GroupWalkError("set for uniform measure contains duplicates");
  }
  return out;
}

// Folner-style test value: the ref-average of || g.chi_A - chi_A || where
// chi_A is the uniform probability measure on A. Computed through the
// counting identity || g.chi_A - chi_A || = 2 |gA \ A| / |A|; the direct
// total variation route is group_discrepancy(ref, chi_A), and the two agree
// exactly in rational mode.
template <class Group, class S>
S folner_measure_test(const GroupMeasure<Group, S>& ref,
                      const std::vector<typename Group::Elem>& set,
                      const Group& group, const Tolerance& tol = {}) {
  if (set.empty()) throw GroupWalkError("Folner test needs a non-empty set");
  if (!is_probability(ref, tol)) {
    throw GroupWalkError("Folner test requires a probability reference measure");
  }
  std::vector<typename Group::Elem> sorted;
  sorted.reserve(set.size());
  for (const auto& e : set) sorted.push_back(group.canonicalize(e));
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw GroupWalkError("Folner set contains duplicates");
  }
  S sum = scalar_traits<S>::zero();
  for (const auto& [g, w] : ref.weights()) {
    long long outside = 0;
    for (const auto& e : sorted) {
      if (!std::binary_search(sorted.begin(), sorted.end(), group.multiply(g, e))) {
        ++outside;
      }
    }
    S term = w;
    term *= scalar_traits<S>::from_ratio(2 * outside,
                                         static_cast<long long>(sorted.size()));
    sum += term;
  }
  return sum;
}

// Discrepancy sweep of the convolution powers mu^{*n} probed by one group
// element: values || probe.mu^{*n} - mu^{*n} || for n = 1..count. On groups
// with exponential support growth the sweep stops at support_cap and reports
// the first power it could not materialize.
template <class S>
struct SweepResult {
  std::vector<S> values;
  std::optional<long> truncated_at;
};

template <class Group, class S>
SweepResult<S> convolution_power_sweep(const GroupMeasure<Group, S>& mu, long count,
                                       const typename Group::Elem& probe,
                                       const Group& group,
                                       std::size_t support_cap = 1000000) {
  SweepResult<S> out;
  out.values.reserve(count);
  GroupMeasure<Group, S> pow = mu;
  for (long n = 1; n <= count; ++n) {
    if (n > 1) {
      pow = group_convolve(pow, mu, group);
    }
    if (pow.support_size() > support_cap) {
      out.truncated_at = n;
      break;
    }
    out.values.push_back(total_variation(left_translate(probe, pow, group), pow));
  }
  return out;
}

}  // namespace gw
