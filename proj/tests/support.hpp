#pragma once

// Shared fixtures and independent oracles for the test suites. The oracles
// here deliberately avoid the library code paths they are used to check:
// dense matrix algebra instead of sparse measures, coefficient arrays
// instead of sparse convolution, and explicit set arithmetic.

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <random>
#include <vector>

#include "gw/groupoid.hpp"
#include "gw/measure.hpp"
#include "gw/operators.hpp"

namespace gwtest {

using gw::FiniteGroupoid;
using gw::GroupoidPtr;
using gw::MorphismId;
using gw::ObjectId;
using gw::Rational;

inline std::vector<std::vector<int>> cyclic_table(int n) {
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  }
  return t;
}

// S3 as permutations of {0,1,2} in one-line notation, composed left to right
// into a lookup table.
inline std::vector<std::vector<int>> s3_table() {
  const std::vector<std::array<int, 3>> perms = {
      {0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
  auto index_of = [&perms](const std::array<int, 3>& p) {
    for (std::size_t i = 0; i < perms.size(); ++i) {
      if (perms[i] == p) return static_cast<int>(i);
    }
    return -1;
  };
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      std::array<int, 3> composed{};
      for (int x = 0; x < 3; ++x) composed[x] = perms[a][perms[b][x]];
      t[a][b] = index_of(composed);
    }
  }
  return t;
}

inline GroupoidPtr shared(FiniteGroupoid g) {
  return std::make_shared<const FiniteGroupoid>(std::move(g));
}

// Z_2 acting on {x, y} by swap.
inline gw::ActionSpec swap_action() {
  gw::ActionSpec spec;
  spec.group = cyclic_table(2);
  spec.action = {{0, 1}, {1, 0}};
  return spec;
}

// Z_n acting on itself by translation.
inline gw::ActionSpec translation_action(int n) {
  gw::ActionSpec spec;
  spec.group = cyclic_table(n);
  spec.action = cyclic_table(n);
  return spec;
}

// Disjoint union of two one-object groupoids given by group tables; object 0
// carries the first group, object 1 the second.
inline FiniteGroupoid disjoint_union_of_groups(const std::vector<std::vector<int>>& a,
                                               const std::vector<std::vector<int>>& b) {
  const int na = static_cast<int>(a.size());
  const int nb = static_cast<int>(b.size());
  const int nm = na + nb;
  std::vector<ObjectId> source(nm), target(nm);
  std::vector<MorphismId> inverse(nm);
  std::vector<MorphismId> unit(2);
  std::vector<std::vector<MorphismId>> compose(nm, std::vector<MorphismId>(nm, -1));
  for (int i = 0; i < na; ++i) {
    source[i] = 0;
    target[i] = 0;
    for (int j = 0; j < na; ++j) compose[i][j] = a[i][j];
  }
  for (int i = 0; i < nb; ++i) {
    source[na + i] = 1;
    target[na + i] = 1;
    for (int j = 0; j < nb; ++j) compose[na + i][na + j] = na + b[i][j];
  }
  auto identity_of = [](const std::vector<std::vector<int>>& t) {
    for (int e = 0; e < static_cast<int>(t.size()); ++e) {
      if (t[e][0] == 0 && t[0][e] == 0) {
        bool ok = true;
        for (int x = 0; x < static_cast<int>(t.size()); ++x) {
          ok = ok && t[e][x] == x && t[x][e] == x;
        }
        if (ok) return e;
      }
    }
    return -1;
  };
  const int ea = identity_of(a);
  const int eb = identity_of(b);
  unit[0] = ea;
  unit[1] = na + eb;
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < na; ++j) {
      if (a[i][j] == ea) inverse[i] = j;
    }
  }
  for (int i = 0; i < nb; ++i) {
    for (int j = 0; j < nb; ++j) {
      if (b[i][j] == eb) inverse[na + i] = na + j;
    }
  }
  return FiniteGroupoid::from_tables(source, target, unit, inverse, compose);
}

// ------------------------------------------------------------------------
// Random instance generation. Everything is driven by a caller-owned engine
// so suites stay reproducible.

// Random partition of {0..count-1} into non-empty blocks.
inline gw::PartitionSpec random_partition(std::mt19937_64& rng, int count,
                                          int max_block) {
  gw::PartitionSpec spec;
  std::vector<ObjectId> objects(count);
  for (int i = 0; i < count; ++i) objects[i] = i;
  std::shuffle(objects.begin(), objects.end(), rng);
  std::size_t used = 0;
  while (used < objects.size()) {
    std::uniform_int_distribution<int> size_dist(
        1, std::min<int>(max_block, static_cast<int>(objects.size() - used)));
    const int size = size_dist(rng);
    spec.blocks.emplace_back(objects.begin() + used, objects.begin() + used + size);
    used += size;
  }
  return spec;
}

// Random action of Z_k on a small set: the generator acts by a permutation
// assembled from cycles whose lengths divide k.
inline gw::ActionSpec random_cyclic_action(std::mt19937_64& rng, int k, int points) {
  std::vector<int> divisors;
  for (int d = 1; d <= k; ++d) {
    if (k % d == 0) divisors.push_back(d);
  }
  std::vector<int> perm(points, -1);
  std::vector<int> free_points(points);
  for (int i = 0; i < points; ++i) free_points[i] = i;
  std::shuffle(free_points.begin(), free_points.end(), rng);
  std::size_t used = 0;
  while (used < free_points.size()) {
    std::vector<int> fitting;
    for (int d : divisors) {
      if (static_cast<std::size_t>(d) <= free_points.size() - used) fitting.push_back(d);
    }
    std::uniform_int_distribution<std::size_t> pick(0, fitting.size() - 1);
    const int len = fitting[pick(rng)];
    for (int i = 0; i < len; ++i) {
      perm[free_points[used + i]] = free_points[used + (i + 1) % len];
    }
    used += len;
  }
  gw::ActionSpec spec;
  spec.group = cyclic_table(k);
  spec.action.assign(k, std::vector<int>(points));
  for (int x = 0; x < points; ++x) spec.action[0][x] = x;
  for (int g = 1; g < k; ++g) {
    for (int x = 0; x < points; ++x) spec.action[g][x] = perm[spec.action[g - 1][x]];
  }
  return spec;
}

// Random small groupoid: a group, a pair groupoid, or a cyclic action
// groupoid, all within the stated object and fibre bounds.
inline FiniteGroupoid random_groupoid(std::mt19937_64& rng, int max_objects = 6,
                                      int max_fibre = 8) {
  std::uniform_int_distribution<int> kind(0, 3);
  switch (kind(rng)) {
    case 0: {
      std::uniform_int_distribution<int> order(1, max_fibre);
      return gw::build_group_groupoid(cyclic_table(order(rng)));
    }
    case 1:
      return gw::build_group_groupoid(s3_table());
    case 2: {
      std::uniform_int_distribution<int> count(1, max_objects);
      const int n = count(rng);
      return gw::build_pair_groupoid(random_partition(rng, n, std::min(n, max_fibre)));
    }
    default: {
      std::uniform_int_distribution<int> order(1, 4);
      const int k = order(rng);
      std::uniform_int_distribution<int> count(1, std::max(1, max_objects));
      const int points = count(rng);
      return gw::build_action_groupoid(random_cyclic_action(rng, k, points));
    }
  }
}

// Random probability system with small rational masses and non-empty fibre
// supports.
inline gw::FibredSystem<Rational> random_system(std::mt19937_64& rng,
                                                const FiniteGroupoid& g) {
  gw::FibredSystem<Rational> sys(g.object_count());
  std::uniform_int_distribution<int> mass(0, 4);
  for (ObjectId x = 0; x < g.object_count(); ++x) {
    const auto& fibre = g.fibre(x);
    std::vector<int> raw(fibre.size());
    long long total = 0;
    for (std::size_t i = 0; i < fibre.size(); ++i) {
      raw[i] = mass(rng);
      total += raw[i];
    }
    if (total == 0) {
      std::uniform_int_distribution<std::size_t> pick(0, fibre.size() - 1);
      raw[pick(rng)] = 1;
      total = 1;
    }
    for (std::size_t i = 0; i < fibre.size(); ++i) {
      if (raw[i] > 0) sys.at(x).set(fibre[i], gw::make_rational(raw[i], total));
    }
  }
  return sys;
}

// Random probability measure on the whole morphism set.
inline gw::Measure<Rational> random_probability_measure(std::mt19937_64& rng,
                                                        const FiniteGroupoid& g) {
  std::uniform_int_distribution<int> mass(0, 4);
  std::vector<int> raw(g.morphism_count());
  long long total = 0;
  for (int m = 0; m < g.morphism_count(); ++m) {
    raw[m] = mass(rng);
    total += raw[m];
  }
  if (total == 0) {
    raw[0] = 1;
    total = 1;
  }
  gw::Measure<Rational> out;
  for (int m = 0; m < g.morphism_count(); ++m) {
    if (raw[m] > 0) out.set(m, gw::make_rational(raw[m], total));
  }
  return out;
}

// ------------------------------------------------------------------------
// Dense linear-algebra oracle for fibre chains.

using DenseMatrix = std::vector<std::vector<Rational>>;

inline DenseMatrix dense_multiply(const DenseMatrix& a, const DenseMatrix& b) {
  const std::size_t n = a.size();
  DenseMatrix out(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        out[i][j] += a[i][k] * b[k][j];
      }
    }
  }
  return out;
}

inline DenseMatrix dense_identity(std::size_t n) {
  DenseMatrix out(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) out[i][i] = 1;
  return out;
}

inline DenseMatrix dense_power(const DenseMatrix& a, long k) {
  DenseMatrix acc = dense_identity(a.size());
  for (long i = 0; i < k; ++i) acc = dense_multiply(acc, a);
  return acc;
}

template <class S>
DenseMatrix to_dense(const gw::FibreMatrix<S>& m) {
  DenseMatrix out(m.size(), std::vector<Rational>(m.size(), Rational(0)));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) out[i][j] = m.at(i, j);
  }
  return out;
}

inline Rational dense_row_tv(const DenseMatrix& m, std::size_t a, std::size_t b) {
  Rational sum(0);
  for (std::size_t j = 0; j < m.size(); ++j) {
    Rational d = m[a][j] - m[b][j];
    sum += d < 0 ? Rational(-d) : d;
  }
  return sum;
}

// ------------------------------------------------------------------------
// Coefficient-array oracle for walks on Z: index i holds the mass at
// offset + i. Convolution is the plain double loop over coefficients.

struct ZPolynomial {
  long long offset = 0;
  std::vector<Rational> coeff;

  Rational at(long long point) const {
    const long long i = point - offset;
    if (i < 0 || i >= static_cast<long long>(coeff.size())) return Rational(0);
    return coeff[i];
  }
};

inline ZPolynomial z_poly_convolve(const ZPolynomial& a, const ZPolynomial& b) {
  ZPolynomial out;
  out.offset = a.offset + b.offset;
  out.coeff.assign(a.coeff.size() + b.coeff.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeff.size(); ++i) {
    for (std::size_t j = 0; j < b.coeff.size(); ++j) {
      out.coeff[i + j] += a.coeff[i] * b.coeff[j];
    }
  }
  return out;
}

// || delta_shift * p - p || computed directly on the coefficient array.
inline Rational z_poly_shift_tv(const ZPolynomial& p, long long shift) {
  const long long lo = std::min(p.offset, p.offset + shift);
  const long long hi = p.offset + static_cast<long long>(p.coeff.size()) +
                       std::max<long long>(0, shift);
  Rational sum(0);
  for (long long point = lo; point < hi; ++point) {
    Rational d = p.at(point - shift) - p.at(point);
    sum += d < 0 ? Rational(-d) : d;
  }
  return sum;
}

}  // namespace gwtest
