#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gw/boundary.hpp"
#include "gw/operators.hpp"
#include "gw/parallel.hpp"
#include "gw/rng.hpp"

namespace gw {

class RwreError : public std::runtime_error {
 public:
  explicit RwreError(const std::string& what) : std::runtime_error(what) {}
};

// Measures on a finite group whose elements are the indices into its
// multiplication table.
template <class S>
using FiniteGroupMeasure = SparseMeasure<int, S>;

// An environment on a finite group: one increment distribution per group
// element, together with the multiplication table of the group. The walk
// moves g -> g h with h drawn from increment_at(g).
template <class S>
struct Environment {
  std::vector<std::vector<int>> group;
  std::vector<FiniteGroupMeasure<S>> increments;

  int group_size() const { return static_cast<int>(increments.size()); }
  const FiniteGroupMeasure<S>& increment_at(int g) const {
    if (g < 0 || g >= group_size()) {
      throw RwreError("no increment distribution at state " + std::to_string(g));
    }
    return increments[g];
  }
  int step(int g, int h) const { return group[g][h]; }
};

// A map assigning a step distribution on the group to every point of the
// action space; the raw datum behind both the equivariant chain and the
// environments.
template <class S>
using PointwiseSystem = std::vector<FiniteGroupMeasure<S>>;

namespace detail {

inline std::vector<int> group_inverses(const std::vector<std::vector<int>>& table,
                                       int identity) {
  const int n = static_cast<int>(table.size());
  std::vector<int> inv(n, -1);
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h) {
      if (table[g][h] == identity) {
        inv[g] = h;
        break;
      }
    }
  }
  return inv;
}

}  // namespace detail

// Environment of the point x: the increment distribution at the group
// element g is theta evaluated at the point g^{-1} x. Constant theta gives
// the constant environment, i.e. an ordinary random walk.
template <class S>
Environment<S> environment_of(const PointwiseSystem<S>& theta, ObjectId x,
                              const ActionSpec& spec) {
  const int ng = spec.group_size();
  if (static_cast<int>(theta.size()) != spec.space_size()) {
    throw RwreError("theta must assign a measure to every point of the space");
  }
  const int identity = validate_group_table(spec.group);
  const std::vector<int> inv = detail::group_inverses(spec.group, identity);
  Environment<S> env;
  env.group = spec.group;
  env.increments.reserve(ng);
  for (int g = 0; g < ng; ++g) {
    env.increments.push_back(theta[spec.action[inv[g]][x]]);
  }
  return env;
}

template <class S>
struct EnvironmentField {
  std::vector<Environment<S>> point_to_env;
};

template <class S>
EnvironmentField<S> environment_field(const PointwiseSystem<S>& theta,
                                      const ActionSpec& spec) {
  EnvironmentField<S> field;
  field.point_to_env.reserve(spec.space_size());
  for (ObjectId x = 0; x < spec.space_size(); ++x) {
    field.point_to_env.push_back(environment_of(theta, x, spec));
  }
  return field;
}

// Lifts a pointwise system to the target fibred system of the action
// groupoid: the mass theta_x(g) sits on the morphism (g, x).
template <class S>
FibredSystem<S> system_from_pointwise(const FiniteGroupoid& g,
                                      const PointwiseSystem<S>& theta,
                                      const ActionSpec& spec) {
  const int nx = spec.space_size();
  if (g.object_count() != nx || g.morphism_count() != nx * spec.group_size()) {
    throw RwreError("groupoid does not match the action spec");
  }
  FibredSystem<S> sys(nx);
  for (ObjectId x = 0; x < nx; ++x) {
    for (const auto& [elem, v] : theta[x].weights()) {
      sys.at(x).set(elem * nx + x, v);
    }
  }
  return sys;
}

// Transition matrix of the walk in one environment, indexed consistently
// with the fibre ordering of the action groupoid over x (the morphism
// (g, x) corresponds to the state g). Built from the environment alone and
// cross-checked entry by entry against the fibre matrix of the equivariant
// operator; the two construction routes must agree exactly.
template <class S>
FibreMatrix<S> fibre_operator_equivalence(const ActionSpec& spec,
                                          const PointwiseSystem<S>& theta,
                                          ObjectId x) {
  const GroupoidPtr g =
      std::make_shared<const FiniteGroupoid>(build_action_groupoid(spec));
  const int nx = spec.space_size();
  const Environment<S> env = environment_of(theta, x, spec);

  FibreMatrix<S> direct;
  direct.object = x;
  direct.index = g->fibre(x);
  const std::size_t n = direct.index.size();
  direct.data.assign(n * n, scalar_traits<S>::zero());
  for (std::size_t row = 0; row < n; ++row) {
    const int state = direct.index[row] / nx;  // morphism (g, x) -> state g
    for (const auto& [h, v] : env.increment_at(state).weights()) {
      const int next = env.step(state, h);
      direct.at(row, static_cast<std::size_t>(g->fibre_index(next * nx + x))) = v;
    }
  }

  const EquivariantOperator<S> op(g, system_from_pointwise(*g, theta, spec));
  const FibreMatrix<S> via_operator = fibre_matrix(op, x);
  if (via_operator.index != direct.index || via_operator.data != direct.data) {
    throw RwreError("environment route and operator route disagree over point " +
                    std::to_string(x));
  }
  return direct;
}

struct PathSample {
  std::vector<int> states;
  std::uint64_t seed = 0;
};

namespace detail {

template <class S>
int draw(const FiniteGroupMeasure<S>& mu, SeededRng& rng) {
  if (mu.empty()) throw RwreError("cannot sample from an empty distribution");
  const double u = rng.next_u01();
  double acc = 0.0;
  int last = mu.weights().rbegin()->first;
  for (const auto& [elem, v] : mu.weights()) {
    acc += scalar_traits<S>::to_double(v);
    if (u < acc) return elem;
    last = elem;
  }
  return last;  // guards against rounding in the cumulative sum
}

}  // namespace detail

// One trajectory of the walk in a fixed environment; reproducible from the
// recorded seed.
template <class S>
PathSample sample_rwre_path(const Environment<S>& env, int start, long steps,
                            std::uint64_t seed) {
  PathSample out;
  out.seed = seed;
  out.states.reserve(steps + 1);
  out.states.push_back(start);
  SeededRng rng(seed);
  int state = start;
  for (long k = 0; k < steps; ++k) {
    state = env.step(state, detail::draw(env.increment_at(state), rng));
    out.states.push_back(state);
  }
  return out;
}

// Exact n-step distribution of the walk in one environment, starting at a
// point mass.
template <class S>
FiniteGroupMeasure<S> exact_step_distribution(const Environment<S>& env, int start,
                                              long steps) {
  FiniteGroupMeasure<S> dist = FiniteGroupMeasure<S>::point_mass(start);
  for (long k = 0; k < steps; ++k) {
    FiniteGroupMeasure<S> next;
    for (const auto& [g, w] : dist.weights()) {
      for (const auto& [h, v] : env.increment_at(g).weights()) {
        S mass = w;
        mass *= v;
        next.add(env.step(g, h), mass);
      }
    }
    dist = std::move(next);
  }
  return dist;
}

// Empirical n-step distribution over independent seeded paths; path i uses
// the stream seed mix(base_seed, i), so the histogram does not depend on
// how the paths are scheduled across workers.
template <class S>
std::vector<std::uint64_t> sample_rwre_histogram(const Environment<S>& env,
                                                 int start, long steps,
                                                 long samples,
                                                 std::uint64_t base_seed) {
  std::vector<std::uint64_t> counts(env.group_size(), 0);
  const unsigned workers = worker_count();
  std::vector<std::vector<std::uint64_t>> partial(
      workers, std::vector<std::uint64_t>(env.group_size(), 0));
  parallel_for(workers, [&](std::size_t w) {
    auto& mine = partial[w];
    for (long i = static_cast<long>(w); i < samples;
         i += static_cast<long>(workers)) {
      SeededRng rng(SeededRng::mix(base_seed, static_cast<std::uint64_t>(i)));
      int state = start;
      for (long k = 0; k < steps; ++k) {
        state = env.step(state, detail::draw(env.increment_at(state), rng));
      }
      ++mine[state];
    }
  });
  for (const auto& part : partial) {
    for (std::size_t g = 0; g < counts.size(); ++g) counts[g] += part[g];
  }
  return counts;
}

// Boundary report of the equivariant chain induced by theta on the action
// groupoid, phrased per orbit point: the profile at x describes the walk in
// the environment of x.
template <class S>
FibrewiseReport<S> rwre_tail_report(const ActionSpec& spec,
                                    const PointwiseSystem<S>& theta,
                                    const ObjectMeasure<S>& kappa, long horizon,
                                    BoundaryMode mode, double threshold = 1e-6) {
  const GroupoidPtr g =
      std::make_shared<const FiniteGroupoid>(build_action_groupoid(spec));
  const EquivariantOperator<S> op(g, system_from_pointwise(*g, theta, spec));
  return fibrewise_report(op, kappa, horizon, mode, threshold);
}

}  // namespace gw
