// Acceptance suite: each numbered criterion is exercised at its stated
// tolerance and reports exactly one pass/fail line. Exact-arithmetic checks
// use the rational backend end to end; the only floating point enters
// through the seeded Monte Carlo histogram and its statistical tolerance.

#include <chrono>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "gw/amenability.hpp"
#include "gw/boundary.hpp"
#include "gw/group_walks.hpp"
#include "gw/operators.hpp"
#include "gw/rwre.hpp"
#include "support.hpp"

using namespace gw;
using gwtest::shared;

namespace {

int failures = 0;

class Criterion {
 public:
  Criterion(int id, std::string name)
      : id_(id), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}

  void fail(const std::string& why) {
    ok_ = false;
    if (!why_.empty()) why_ += "; ";
    why_ += why;
  }

  void require(bool condition, const std::string& why) {
    if (!condition) fail(why);
  }

  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

  void finish(double time_limit_seconds = 0.0) {
    const double elapsed = seconds();
    if (time_limit_seconds > 0 && elapsed > time_limit_seconds) {
      std::ostringstream os;
      os << "runtime " << elapsed << "s above the " << time_limit_seconds
         << "s limit";
      fail(os.str());
    }
    std::ostringstream line;
    line << (ok_ ? "[PASS]" : "[FAIL]") << " criterion " << id_ << ": " << name_;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << " (" << elapsed << "s)";
    if (!ok_) {
      line << " -- " << why_;
      ++failures;
    }
    std::cout << line.str() << "\n";
  }

 private:
  int id_;
  std::string name_;
  bool ok_ = true;
  std::string why_;
  std::chrono::steady_clock::time_point start_;
};

EquivariantOperator<Rational> z2_deterministic() {
  auto g = shared(build_group_groupoid(gwtest::cyclic_table(2)));
  FibredSystem<Rational> sys(1);
  sys.at(0).set(1, Rational(1));
  return EquivariantOperator<Rational>(g, std::move(sys));
}

EquivariantOperator<Rational> z4_deterministic() {
  auto g = shared(build_group_groupoid(gwtest::cyclic_table(4)));
  FibredSystem<Rational> sys(1);
  sys.at(0).set(1, Rational(1));
  return EquivariantOperator<Rational>(g, std::move(sys));
}

void criterion_1_axioms() {
  Criterion c(1, "axiom, Haar invariance, and equivariance suite");
  std::mt19937_64 rng(10001);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = shared(gwtest::random_groupoid(rng, 6, 8));
    if (!verify_axioms(*g).ok()) {
      c.fail("axiom violation in trial " + std::to_string(trial));
      break;
    }
    if (!is_left_invariant(*g, counting_haar<Rational>(*g))) {
      c.fail("Haar left invariance failed in trial " + std::to_string(trial));
      break;
    }
    EquivariantOperator<Rational> p(g, gwtest::random_system(rng, *g));
    bool equivariant = true;
    for (MorphismId a = 0; a < g->morphism_count() && equivariant; ++a) {
      for (MorphismId b = 0; b < g->morphism_count() && equivariant; ++b) {
        if (!g->composable(a, b)) continue;
        equivariant =
            p.transition(g->compose(a, b)) == translate(*g, a, p.transition(b));
      }
    }
    if (!equivariant) {
      c.fail("equivariance failed in trial " + std::to_string(trial));
      break;
    }
  }
  c.finish(10.0);
}

void criterion_2_inequalities() {
  Criterion c(2, "discrepancy inequality suite (1000 exact triples)");
  std::mt19937_64 rng(10002);
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto g = shared(gwtest::random_groupoid(rng, 6, 8));
    EquivariantOperator<Rational> p(g, gwtest::random_system(rng, *g));
    EquivariantOperator<Rational> q(g, gwtest::random_system(rng, *g));
    const auto m = gwtest::random_probability_measure(rng, *g);

    if (!(mean_discrepancy(m, compose_operators(p, q)) <= mean_discrepancy(m, p))) {
      ++violations;
    }
    const auto mq = apply_measure(m, q);
    const auto mbar_q = apply_measure(target_pushforward(*g, m), q);
    if (!(mean_discrepancy(m, compose_operators(q, p)) <=
          mean_discrepancy(mq, p) + mean_discrepancy(mbar_q, p))) {
      ++violations;
    }
    const auto ref = reference_measure<Rational>(*g);
    Rational prev = mean_discrepancy(ref, p);
    auto pk = p;
    for (int k = 2; k <= 3; ++k) {
      pk = compose_operators(pk, p);
      const Rational cur = mean_discrepancy(ref, pk);
      if (!(cur <= prev)) ++violations;
      prev = cur;
    }
  }
  c.require(violations == 0, std::to_string(violations) + " violation(s)");
  c.finish();
}

void criterion_3_qpn_echo() {
  Criterion c(3, "QP_n bound holds exactly and decays below 1e-6");
  auto g = shared(build_group_groupoid(gwtest::cyclic_table(4)));
  const auto ref = reference_measure<Rational>(*g);

  // seeded decaying provider: P_n mixes the uniform system with a shrinking
  // identity part of weight 2^{-n}
  const auto uniform = uniform_system<Rational>(*g);
  const auto id = identity_system<Rational>(*g);
  OperatorProvider<Rational> provider(
      [g, &uniform, &id](long n) {
        Rational lambda = make_rational(1, 2);
        for (long i = 1; i < n; ++i) lambda /= 2;
        FibredSystem<Rational> sys(1);
        add_system_scaled(sys, id, lambda);
        add_system_scaled(sys, uniform, Rational(1 - lambda));
        return EquivariantOperator<Rational>(g, std::move(sys));
      },
      30);

  FibredSystem<Rational> qsys(1);
  qsys.at(0).add(0, make_rational(1, 2));
  qsys.at(0).add(1, make_rational(1, 4));
  qsys.at(0).add(3, make_rational(1, 4));
  EquivariantOperator<Rational> q(g, std::move(qsys));

  const auto mbar = target_pushforward(*g, ref);
  Rational last_rhs(2);
  for (long n = 1; n <= 30; ++n) {
    const auto& pn = provider.at(n);
    const Rational lhs = mean_discrepancy(ref, compose_operators(q, pn));
    const Rational rhs = mean_discrepancy(apply_measure(ref, q), pn) +
                         mean_discrepancy(apply_measure(mbar, q), pn);
    if (!(lhs <= rhs)) {
      c.fail("inequality failed at n = " + std::to_string(n));
      break;
    }
    last_rhs = rhs;
  }
  c.require(last_rhs <= make_rational(1, 1000000),
            "right side still " + scalar_traits<Rational>::to_string(last_rhs) +
                " at the horizon");
  c.finish();
}

void criterion_4_construction() {
  Criterion c(4, "convex combination construction on the Z4 fixture");
  auto g = shared(build_group_groupoid(gwtest::cyclic_table(4)));
  const auto ref = reference_measure<Rational>(*g);
  auto provider = growing_uniform_provider<Rational>(g, 40);
  const auto schedule = build_schedule<Rational>(3);
  c.require(schedule.eps[1] == make_rational(1, 4) &&
                schedule.eps[2] == make_rational(1, 8),
            "schedule epsilons are not (., 1/4, 1/8)");
  try {
    const auto result = construct_liouville(provider, ref, schedule);
    const Rational slack = result.certificate.truncation_residual * 2;
    for (const auto& check : result.certificate.checks) {
      std::ostringstream why;
      why << "stage " << check.stage << " measured "
          << scalar_traits<Rational>::to_string(check.measured) << " above bound";
      c.require(check.measured <= check.epsilon * 3 + slack, why.str());
    }
    const auto verdict =
        verify_certificate(result.combined, ref, schedule, result.certificate);
    c.require(verdict.ok, "certificate verification failed");
  } catch (const std::exception& e) {
    c.fail(std::string("construction aborted: ") + e.what());
  }
  c.finish(60.0);
}

void criterion_5_zero_two_fixtures() {
  Criterion c(5, "0-2-law fixtures");
  const auto det = z2_deterministic();
  const auto tail = tail_triviality_profile(det, 0, 50);
  for (const auto& v : tail.values) {
    if (v != 2) {
      c.fail("Z2 deterministic tail statistic left 2");
      break;
    }
  }
  const auto lazy = exit_triviality_profile(det, 0, 5, BoundaryMode::lazy);
  c.require(lazy.values.front() == 0, "Z2 lazy-mode exit d_1 is not 0");

  std::mt19937_64 rng(10005);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = shared(gwtest::random_groupoid(rng, 6, 8));
    EquivariantOperator<Rational> u(g, uniform_system<Rational>(*g));
    for (ObjectId x = 0; x < g->object_count(); ++x) {
      const auto profile = tail_triviality_profile(u, x, 3);
      if (profile.values.front() != 0) {
        c.fail("uniform operator did not merge at d_1 on some fibre");
        break;
      }
    }
  }
  c.finish();
}

void criterion_6_group_sweeps() {
  Criterion c(6, "group walk sweeps on Z and the free group");
  IntegerGroup z;
  GroupMeasure<IntegerGroup, Rational> mu;
  mu.add(0, make_rational(1, 2));
  mu.add(-1, make_rational(1, 4));
  mu.add(1, make_rational(1, 4));
  const auto sweep = convolution_power_sweep(mu, 64, 1LL, z);
  c.require(sweep.values.size() == 64, "Z sweep truncated");
  c.require(sweep.values[0] == Rational(1), "Z sweep value at n = 1 is not 1");
  c.require(sweep.values[1] == make_rational(3, 4), "Z sweep value at n = 2 is not 3/4");
  for (std::size_t i = 1; i < sweep.values.size(); ++i) {
    if (!(sweep.values[i] <= sweep.values[i - 1])) {
      c.fail("Z sweep is not non-increasing");
      break;
    }
  }
  c.require(sweep.values[63] <= make_rational(1, 4), "Z sweep above 1/4 at n = 64");

  FreeGroup2 f2;
  GroupMeasure<FreeGroup2, Rational> simple;
  for (const char* w : {"a", "A", "b", "B"}) simple.add(w, make_rational(1, 4));
  const auto free_sweep = convolution_power_sweep(simple, 8, std::string("a"), f2);
  c.require(free_sweep.values.size() == 8, "free group sweep truncated");
  for (const auto& v : free_sweep.values) {
    if (!(v >= 1)) {
      c.fail("free group sweep dropped below 1");
      break;
    }
  }
  c.finish(30.0);
}

void criterion_7_folner() {
  Criterion c(7, "Folner measure tests with two agreeing code paths");
  IntegerGroup z;
  const auto at_one = GroupMeasure<IntegerGroup, Rational>::point_mass(1);
  std::vector<long long> interval;
  for (long long i = 0; i < 10; ++i) interval.push_back(i);
  const Rational z_counting = folner_measure_test(at_one, interval, z);
  const Rational z_tv =
      group_discrepancy(at_one, uniform_on<IntegerGroup, Rational>(interval, z), z);
  c.require(z_counting == make_rational(1, 5), "Z interval value is not 1/5");
  c.require(z_counting == z_tv, "Z code paths disagree");

  FreeGroup2 f2;
  const auto at_a = GroupMeasure<FreeGroup2, Rational>::point_mass("a");
  const auto ball = FreeGroup2::ball(2);
  const Rational f_counting = folner_measure_test(at_a, ball, f2);
  const Rational f_tv =
      group_discrepancy(at_a, uniform_on<FreeGroup2, Rational>(ball, f2), f2);
  c.require(f_counting == make_rational(18, 17), "free group ball value is not 18/17");
  c.require(f_counting == f_tv, "free group code paths disagree");
  c.finish();
}

void criterion_8_rwre() {
  Criterion c(8, "environment/operator equivalence and seeded Monte Carlo");
  std::mt19937_64 rng(10008);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> order(1, 4), points(1, 4);
    const auto spec = gwtest::random_cyclic_action(rng, order(rng), points(rng));
    std::uniform_int_distribution<int> mass(0, 3);
    PointwiseSystem<Rational> theta(spec.space_size());
    for (int x = 0; x < spec.space_size(); ++x) {
      long long total = 0;
      std::vector<int> raw(spec.group_size());
      for (auto& v : raw) total += (v = mass(rng));
      if (total == 0) total = raw[0] = 1;
      for (int e = 0; e < spec.group_size(); ++e) {
        if (raw[e]) theta[x].add(e, make_rational(raw[e], total));
      }
    }
    std::uniform_int_distribution<int> pick(0, spec.space_size() - 1);
    try {
      fibre_operator_equivalence(spec, theta, pick(rng));
    } catch (const std::exception& e) {
      c.fail(std::string("route mismatch in trial ") + std::to_string(trial) + ": " +
             e.what());
      break;
    }
  }

  // state space of 12 group elements for the sampling check
  const auto spec = gwtest::translation_action(12);
  std::uniform_int_distribution<int> mass(0, 3);
  PointwiseSystem<Rational> theta(spec.space_size());
  for (int x = 0; x < spec.space_size(); ++x) {
    long long total = 0;
    std::vector<int> raw(spec.group_size());
    for (auto& v : raw) total += (v = mass(rng));
    if (total == 0) total = raw[0] = 1;
    for (int e = 0; e < spec.group_size(); ++e) {
      if (raw[e]) theta[x].add(e, make_rational(raw[e], total));
    }
  }
  const auto env = environment_of(theta, 1, spec);
  const long steps = 5;
  const long samples = 100000;
  const auto exact = exact_step_distribution(env, 0, steps);
  const auto counts = sample_rwre_histogram(env, 0, steps, samples, 424242);
  double tv = 0;
  for (int e = 0; e < env.group_size(); ++e) {
    tv += std::fabs(static_cast<double>(counts[e]) / samples -
                    scalar_traits<Rational>::to_double(exact.at(e)));
  }
  std::ostringstream why;
  why << "empirical histogram off by TV " << tv;
  c.require(tv <= 0.05, why.str());
  c.finish();
}

void criterion_9_liouville_echo() {
  Criterion c(9, "fibrewise-trivial lazy reports force Delta(ref, P Q_n) decay");
  std::vector<std::pair<EquivariantOperator<Rational>, long>> fixtures;
  fixtures.emplace_back(z2_deterministic(), 10);
  fixtures.emplace_back(z4_deterministic(), 12);
  {
    std::mt19937_64 rng(10009);
    auto g = shared(gwtest::random_groupoid(rng, 6, 8));
    fixtures.emplace_back(
        EquivariantOperator<Rational>(g, uniform_system<Rational>(*g)), 4);
  }
  {
    auto g = shared(build_action_groupoid(gwtest::swap_action()));
    fixtures.emplace_back(
        EquivariantOperator<Rational>(g, uniform_system<Rational>(*g)), 4);
  }

  const Rational threshold = make_rational(1, 1000000);
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    const auto& [p, horizon] = fixtures[i];
    const auto& g = p.groupoid();
    const auto report = fibrewise_report(
        p, ObjectMeasure<Rational>::uniform(g.object_count()), 64, BoundaryMode::lazy);
    if (report.aggregate != 1) {
      c.fail("fixture " + std::to_string(i) + " is not fibrewise trivial");
      continue;
    }
    const auto ref = reference_measure<Rational>(g);
    Rational best(2);
    for (long n = 1; n <= horizon; ++n) {
      const Rational d = mean_discrepancy(ref, compose_operators(p, cesaro(p, n)));
      if (d < best) best = d;
    }
    c.require(best <= threshold,
              "fixture " + std::to_string(i) + " did not decay below 1e-6");
  }
  c.finish();
}

}  // namespace

int main() {
  criterion_1_axioms();
  criterion_2_inequalities();
  criterion_3_qpn_echo();
  criterion_4_construction();
  criterion_5_zero_two_fixtures();
  criterion_6_group_sweeps();
  criterion_7_folner();
  criterion_8_rwre();
  criterion_9_liouville_echo();
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all acceptance criteria passed\n";
  return 0;
}
