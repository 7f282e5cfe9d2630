#pragma once

#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gw/operators.hpp"

namespace gw {

class AmenabilityError : public std::runtime_error {
 public:
  explicit AmenabilityError(const std::string& what) : std::runtime_error(what) {}
};

// Lazily evaluated, memoized sequence of equivariant operators P_1, P_2, ...
// over one shared groupoid. The candidate ISAI sequences fed into the
// Liouville construction all come through this interface.
template <class S>
class OperatorProvider {
 public:
  using Maker = std::function<EquivariantOperator<S>(long)>;

  OperatorProvider(Maker maker, long horizon)
      : maker_(std::move(maker)), horizon_(horizon) {}

  long horizon() const { return horizon_; }

  const EquivariantOperator<S>& at(long n) {
    if (n < 1 || n > horizon_) {
      throw AmenabilityError("provider index " + std::to_string(n) +
                             " outside horizon 1.." + std::to_string(horizon_));
    }
    auto it = memo_.find(n);
    if (it == memo_.end()) it = memo_.emplace(n, maker_(n)).first;
    return it->second;
  }

 private:
  Maker maker_;
  long horizon_ = 0;
  std::map<long, EquivariantOperator<S>> memo_;
};

// P_n = P^n.
template <class S>
OperatorProvider<S> power_provider(EquivariantOperator<S> p, long horizon) {
  return OperatorProvider<S>(
      [p = std::move(p)](long n) { return power(p, n); }, horizon);
}

// P_n = (P + ... + P^n) / n.
template <class S>
OperatorProvider<S> cesaro_provider(EquivariantOperator<S> p, long horizon) {
  return OperatorProvider<S>(
      [p = std::move(p)](long n) { return cesaro(p, n); }, horizon);
}

// One-object groupoids only: the n-th operator carries the uniform measure
// on the first min(n + 1, |G|) group elements. On cyclic groups this sweeps
// through growing intervals until the exactly invariant uniform measure is
// reached.
template <class S>
OperatorProvider<S> growing_uniform_provider(GroupoidPtr g, long horizon) {
  if (g->object_count() != 1) {
    throw AmenabilityError("growing uniform provider needs a one-object groupoid");
  }
  return OperatorProvider<S>(
      [g](long n) {
        const long size = g->morphism_count();
        const long top = std::min(n, size - 1);
        FibredSystem<S> sys(1);
        const S w = scalar_traits<S>::from_ratio(1, top + 1);
        for (long m = 0; m <= top; ++m) {
          sys.at(0).set(static_cast<MorphismId>(m), w);
        }
        return EquivariantOperator<S>(g, std::move(sys));
      },
      horizon);
}

// Mean discrepancies of P_1..P_N against the reference measure; the sequence
// is ISAI on the materialized range exactly when these values decay.
template <class S>
std::vector<S> isai_trajectory(OperatorProvider<S>& provider, const Measure<S>& ref,
                               long count) {
  std::vector<S> out;
  out.reserve(count);
  for (long n = 1; n <= count; ++n) {
    out.push_back(mean_discrepancy(ref, provider.at(n)));
  }
  return out;
}

// The (t_i, epsilon_i, k_i) data of the convex-combination construction:
// positive coefficients t_i summing to one, a strictly decreasing tolerance
// sequence epsilon_i, and the minimal exponents k_i satisfying
// (t_1 + ... + t_{i-1})^{k_i} <= epsilon_i. Only a finite prefix is
// materialized; the dropped tail weight is carried as truncation_residual.
template <class S>
struct Schedule {
  std::vector<S> t;
  std::vector<S> eps;
  std::vector<long> k;
  S truncation_residual = scalar_traits<S>::zero();

  int stages() const { return static_cast<int>(t.size()); }
};

template <class S>
Schedule<S> build_schedule(int stages, const S& t_base, const S& eps_base) {
  if (stages < 1) throw AmenabilityError("schedule needs at least one stage");
  const S one = scalar_traits<S>::one();
  if (!(t_base > 0 && t_base < one && eps_base > 0 && eps_base < one)) {
    throw AmenabilityError("schedule bases must lie strictly between 0 and 1");
  }
  Schedule<S> out;
  S t_pow = t_base;              // t_base^i
  S eps_pow = scalar_traits<S>::one();
  S head = scalar_traits<S>::zero();  // t_1 + ... + t_{i-1}
  const S lead = S(one - t_base);
  long prev_k = 0;
  for (int i = 1; i <= stages; ++i) {
    // t_i = (1 - b) b^{i-1}, so the t_i sum to one over the full sequence.
    S ti = lead;
    ti *= t_pow;
    ti /= t_base;
    eps_pow *= eps_base;
    out.t.push_back(ti);
    out.eps.push_back(eps_pow);
    long ki = prev_k + 1;
    if (i > 1) {
      S pw = head;
      for (long used = 1; used < ki; ++used) pw *= head;
      constexpr long kMaxExponent = 1000000;
      while (pw > eps_pow) {
        pw *= head;
        ++ki;
        if (ki > kMaxExponent) {
          throw AmenabilityError("schedule exponent k_i exceeds 10^6; "
                                 "bases are too close to 1");
        }
      }
    }
    out.k.push_back(ki);
    prev_k = ki;
    head += ti;
    t_pow *= t_base;
  }
  out.truncation_residual = S(one - head);
  return out;
}

template <class S>
Schedule<S> build_schedule(int stages) {
  const S half = scalar_traits<S>::from_ratio(1, 2);
  return build_schedule<S>(stages, half, half);
}

// Limits for the selection scan: the number of enumerated factor products
// per stage is exponential, so it is capped hard.
struct ConstructionCaps {
  std::size_t product_cap = 100000;
};

template <class S>
struct StageCheck {
  int stage = 0;
  long n = 0;       // selected provider index n_i
  long k = 0;       // exponent k_i
  S epsilon;        // epsilon_i
  S measured;       // recomputed discrepancy of the combined power
  S bound;          // 3 epsilon_i + 2 * truncation residual
  bool ok = false;
};

// One candidate inspected during the minimal-n scan of a stage. `worst` is
// the largest value of the selection functional over all enumerated
// products Q, and `worst_factors` the stage indices composing that Q.
template <class S>
struct SelectionRecord {
  int stage = 0;
  long candidate = 0;
  S worst;
  std::vector<int> worst_factors;
  std::size_t products = 0;
  bool accepted = false;
};

template <class S>
struct LiouvilleCertificate {
  std::vector<long> indices;           // n_i, strictly increasing
  std::vector<S> weights;              // renormalized, sum exactly one
  std::vector<StageCheck<S>> checks;   // per-stage power verification
  std::vector<SelectionRecord<S>> scans;
  S truncation_residual = scalar_traits<S>::zero();
};

class HorizonExhaustedError : public AmenabilityError {
 public:
  HorizonExhaustedError(int stage, const std::string& what)
      : AmenabilityError(what), stage(stage) {}
  int stage;
};

class ProductCapError : public AmenabilityError {
 public:
  ProductCapError(std::size_t required, std::size_t cap)
      : AmenabilityError("product enumeration needs " + std::to_string(required) +
                         " entries, above the cap of " + std::to_string(cap)),
        required(required),
        cap(cap) {}
  std::size_t required;
  std::size_t cap;
};

namespace detail {

// Enumeration node for the selection scan: the measures ref.Q and
// pushforward(ref).Q for one ordered product Q of previously selected
// operators. Only these two measures matter for bounding the discrepancy of
// Q P_n, which keeps each candidate check down to two profile dot products.
template <class S>
struct ProductNode {
  Measure<S> moved_ref;
  Measure<S> moved_bar;
  std::vector<int> factors;
};

template <class S>
std::vector<ProductNode<S>> enumerate_products(
    const FiniteGroupoid& g, const Measure<S>& ref,
    const std::vector<EquivariantOperator<S>>& selected, long max_factors,
    std::size_t cap) {
  const std::size_t base = selected.size();
  std::size_t required = 1;
  std::size_t layer = 1;
  for (long len = 1; len <= max_factors; ++len) {
    if (base == 0) break;
    if (layer > cap / base) {
      throw ProductCapError(cap + 1, cap);
    }
    layer *= base;
    if (required > cap - layer) throw ProductCapError(required + layer, cap);
    required += layer;
  }

  std::vector<ProductNode<S>> nodes;
  nodes.reserve(required);
  ProductNode<S> root;
  root.moved_ref = ref;
  root.moved_bar = target_pushforward(g, ref);
  nodes.push_back(std::move(root));
  std::size_t level_begin = 0;
  std::size_t level_end = 1;
  for (long len = 1; len <= max_factors && base > 0; ++len) {
    for (std::size_t parent = level_begin; parent < level_end; ++parent) {
      for (std::size_t j = 0; j < base; ++j) {
        ProductNode<S> child;
        child.moved_ref = apply_measure(nodes[parent].moved_ref, selected[j]);
        child.moved_bar = apply_measure(nodes[parent].moved_bar, selected[j]);
        child.factors = nodes[parent].factors;
        child.factors.push_back(static_cast<int>(j) + 1);
        nodes.push_back(std::move(child));
      }
    }
    level_begin = level_end;
    level_end = nodes.size();
  }
  return nodes;
}

}  // namespace detail

template <class S>
struct LiouvilleResult {
  EquivariantOperator<S> combined;
  LiouvilleCertificate<S> certificate;
};

// Constructive form of the convex-combination theorem: given an ISAI
// sequence P_n, pick indices n_1 < n_2 < ... so that the weighted
// combination P = sum_i t_i P_{n_i} has powers with decaying discrepancy.
//
// Stage 1 takes n_1 = 1. Stage i scans n upward from n_{i-1} + 1 and accepts
// the first n for which every ordered product Q of at most k_i previously
// selected operators satisfies
//     D(ref.Q, P_n) + D(pushforward(ref).Q, P_n) <= epsilon_i ,
// which bounds the discrepancy of Q P_n from above. The finite prefix is
// renormalized and every power bound is inflated by twice the dropped tail
// weight, since replacing the tail by anything moves a total variation
// value by at most twice its mass.
template <class S>
LiouvilleResult<S> construct_liouville(OperatorProvider<S>& provider,
                                       const Measure<S>& ref,
                                       const Schedule<S>& schedule,
                                       const ConstructionCaps& caps = {}) {
  const int stages = schedule.stages();
  LiouvilleCertificate<S> cert;
  cert.truncation_residual = schedule.truncation_residual;

  std::vector<EquivariantOperator<S>> selected;
  selected.reserve(stages);
  selected.push_back(provider.at(1));
  cert.indices.push_back(1);
  const FiniteGroupoid& g = selected.front().groupoid();

  for (int i = 2; i <= stages; ++i) {
    const auto nodes = detail::enumerate_products(
        g, ref, selected, schedule.k[i - 1], caps.product_cap);
    const S& eps_i = schedule.eps[i - 1];
    std::optional<long> chosen;
    for (long n = cert.indices.back() + 1; n <= provider.horizon(); ++n) {
      const EquivariantOperator<S>& pn = provider.at(n);
      const std::vector<S> profile = discrepancy_profile(pn);
      SelectionRecord<S> record;
      record.stage = i;
      record.candidate = n;
      record.products = nodes.size();
      record.worst = scalar_traits<S>::zero();
      for (const auto& node : nodes) {
        S value = mean_discrepancy_with_profile(node.moved_ref, profile);
        value += mean_discrepancy_with_profile(node.moved_bar, profile);
        if (value > record.worst) {
          record.worst = value;
          record.worst_factors = node.factors;
        }
      }
      record.accepted = record.worst <= eps_i;
      const bool accepted = record.accepted;
      const auto worst_factors = record.worst_factors;
      const S worst = record.worst;
      cert.scans.push_back(std::move(record));
      if (accepted) {
        chosen = n;
        break;
      }
      if (n == provider.horizon()) {
        std::ostringstream os;
        os << "stage " << i << ": no admissible index up to horizon "
           << provider.horizon() << "; worst offending product at n = " << n
           << " uses factors (";
        for (std::size_t j = 0; j < worst_factors.size(); ++j) {
          if (j) os << " ";
          os << "R" << worst_factors[j];
        }
        os << ") with value " << scalar_traits<S>::to_string(worst)
           << " > epsilon_" << i;
        throw HorizonExhaustedError(i, os.str());
      }
    }
    if (!chosen) {
      throw HorizonExhaustedError(
          i, "stage " + std::to_string(i) + ": horizon " +
                 std::to_string(provider.horizon()) +
                 " leaves no candidate index to scan");
    }
    selected.push_back(provider.at(*chosen));
    cert.indices.push_back(*chosen);
  }

  // Renormalize the materialized prefix of the weights.
  S head = scalar_traits<S>::zero();
  for (int i = 0; i < stages; ++i) head += schedule.t[i];
  std::vector<std::pair<S, EquivariantOperator<S>>> terms;
  terms.reserve(stages);
  for (int i = 0; i < stages; ++i) {
    S w = S(schedule.t[i] / head);
    cert.weights.push_back(w);
    terms.emplace_back(std::move(w), selected[i]);
  }
  EquivariantOperator<S> combined = convex_combination(terms);

  // Per-stage verification of the power discrepancies.
  S slack = cert.truncation_residual;
  slack *= scalar_traits<S>::from_ratio(2, 1);
  const long max_k = schedule.k.back();
  EquivariantOperator<S> pk = combined;
  long next_stage = 0;
  for (long kk = 1; kk <= max_k; ++kk) {
    if (kk > 1) pk = compose_operators(pk, combined);
    while (next_stage < stages && schedule.k[next_stage] == kk) {
      StageCheck<S> check;
      check.stage = next_stage + 1;
      check.n = cert.indices[next_stage];
      check.k = kk;
      check.epsilon = schedule.eps[next_stage];
      check.measured = mean_discrepancy(ref, pk);
      check.bound = schedule.eps[next_stage];
      check.bound *= scalar_traits<S>::from_ratio(3, 1);
      check.bound += slack;
      check.ok = check.measured <= check.bound;
      cert.checks.push_back(std::move(check));
      ++next_stage;
    }
  }

  return LiouvilleResult<S>{std::move(combined), std::move(cert)};
}

struct VerificationResult {
  bool ok = false;
  std::string report;
};

// Independent recomputation of the certificate: powers of the combined
// operator are rebuilt from scratch, their discrepancies compared against
// the recorded values and bounds, and the monotone decay of the power
// discrepancies is checked along the way.
template <class S>
VerificationResult verify_certificate(const EquivariantOperator<S>& combined,
                                      const Measure<S>& ref,
                                      const Schedule<S>& schedule,
                                      const LiouvilleCertificate<S>& cert,
                                      const Tolerance& tol = {}) {
  VerificationResult out;
  std::ostringstream os;
  bool ok = true;

  S weight_sum = scalar_traits<S>::zero();
  for (const auto& w : cert.weights) weight_sum += w;
  if (!scalar_traits<S>::equal(weight_sum, scalar_traits<S>::one(), tol)) {
    ok = false;
    os << "weights sum to " << scalar_traits<S>::to_string(weight_sum)
       << ", not 1\n";
  }
  for (std::size_t i = 1; i < cert.indices.size(); ++i) {
    if (cert.indices[i] <= cert.indices[i - 1]) {
      ok = false;
      os << "indices not strictly increasing at stage " << i + 1 << "\n";
    }
  }
  if (cert.checks.size() != static_cast<std::size_t>(schedule.stages())) {
    ok = false;
    os << "certificate has " << cert.checks.size() << " stage checks, expected "
       << schedule.stages() << "\n";
  }

  S slack = cert.truncation_residual;
  slack *= scalar_traits<S>::from_ratio(2, 1);
  const S drift = scalar_traits<S>::from_double(
      scalar_traits<S>::exact ? 0.0 : tol.epsilon);

  const long max_k = schedule.k.back();
  EquivariantOperator<S> pk = combined;
  S previous = scalar_traits<S>::from_ratio(2, 1);
  std::size_t stage = 0;
  for (long kk = 1; kk <= max_k; ++kk) {
    if (kk > 1) pk = compose_operators(pk, combined);
    const S measured = mean_discrepancy(ref, pk);
    S allowed = previous;
    allowed += drift;
    if (measured > allowed) {
      ok = false;
      os << "power discrepancy increased at k = " << kk << "\n";
    }
    previous = measured;
    while (stage < cert.checks.size() && schedule.k[stage] == kk) {
      const auto& check = cert.checks[stage];
      S bound = schedule.eps[stage];
      bound *= scalar_traits<S>::from_ratio(3, 1);
      bound += slack;
      S bound_allowed = bound;
      bound_allowed += drift;
      if (measured > bound_allowed) {
        ok = false;
        os << "stage " << stage + 1 << ": measured "
           << scalar_traits<S>::to_string(measured) << " above bound "
           << scalar_traits<S>::to_string(bound) << "\n";
      }
      if (!scalar_traits<S>::equal(measured, check.measured, tol)) {
        ok = false;
        os << "stage " << stage + 1 << ": recomputed "
           << scalar_traits<S>::to_string(measured)
           << " differs from recorded "
           << scalar_traits<S>::to_string(check.measured) << "\n";
      }
      os << "stage " << stage + 1 << ": n=" << check.n << " k=" << check.k
         << " measured=" << scalar_traits<S>::to_string(measured)
         << " bound=" << scalar_traits<S>::to_string(bound) << "\n";
      ++stage;
    }
  }

  out.ok = ok;
  out.report = os.str();
  return out;
}

}  // namespace gw
