// gwalk: command line front end for the groupoid walk library. One
// subcommand per pipeline; all inputs are JSON files or literals, all
// tabular outputs are CSV with a header row. Runs are reproducible: every
// subcommand echoes its resolved configuration and all randomness is
// controlled by --seed.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gw/amenability.hpp"
#include "gw/boundary.hpp"
#include "gw/group_walks.hpp"
#include "gw/io.hpp"
#include "gw/operators.hpp"
#include "gw/rwre.hpp"

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

void echo_config(const std::string& subcommand,
                 const std::vector<std::pair<std::string, std::string>>& keys) {
  std::cout << "# config subcommand=" << subcommand;
  for (const auto& [k, v] : keys) std::cout << " " << k << "=" << v;
  std::cout << "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw gw::SchemaError("cannot write file '" + path + "'");
  out << text;
}

template <class Fn>
void write_csv_file(const std::string& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw gw::SchemaError("cannot write file '" + path + "'");
  fn(out);
}

bool is_exact(const std::string& arith) {
  if (arith == "exact") return true;
  if (arith == "float") return false;
  throw UsageError("--arith must be 'exact' or 'float'");
}

// Fractions on the command line are "num/den" or a plain integer.
template <class S>
S parse_fraction(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      return gw::scalar_traits<S>::from_ratio(std::stoll(text), 1);
    }
    return gw::scalar_traits<S>::from_ratio(std::stoll(text.substr(0, slash)),
                                            std::stoll(text.substr(slash + 1)));
  } catch (const std::logic_error&) {
    throw UsageError("cannot parse fraction '" + text + "'");
  }
}

template <class S>
gw::FibredSystem<S> load_system(const std::string& path, const gw::FiniteGroupoid& g);

template <>
gw::FibredSystem<gw::Rational> load_system(const std::string& path,
                                           const gw::FiniteGroupoid& g) {
  return gw::parse_system_exact(gw::read_file(path), g);
}

template <>
gw::FibredSystem<double> load_system(const std::string& path,
                                     const gw::FiniteGroupoid& g) {
  return gw::parse_system_float(gw::read_file(path), g);
}

template <class S>
gw::PointwiseSystem<S> load_pointwise(const std::string& path, int space, int group);

template <>
gw::PointwiseSystem<gw::Rational> load_pointwise(const std::string& path, int space,
                                                 int group) {
  return gw::parse_pointwise_exact(gw::read_file(path), space, group);
}

template <>
gw::PointwiseSystem<double> load_pointwise(const std::string& path, int space,
                                           int group) {
  return gw::parse_pointwise_float(gw::read_file(path), space, group);
}

template <class S>
gw::ObjectMeasure<S> load_kappa(const std::string& path, int objects);

template <>
gw::ObjectMeasure<gw::Rational> load_kappa(const std::string& path, int objects) {
  return gw::parse_object_measure_exact(gw::read_file(path), objects);
}

template <>
gw::ObjectMeasure<double> load_kappa(const std::string& path, int objects) {
  return gw::parse_object_measure_float(gw::read_file(path), objects);
}

template <class S>
std::string probability_diagnostic(const gw::FiniteGroupoid& g,
                                   const gw::FibredSystem<S>& sys) {
  std::ostringstream os;
  os << "system is not a target fibred probability system:\n";
  for (gw::ObjectId x = 0; x < g.object_count(); ++x) {
    const S total = sys.at(x).total();
    const bool bad = !(total == gw::scalar_traits<S>::one()) || sys.at(x).empty() ||
                     !sys.at(x).nonnegative();
    if (bad) {
      os << "  fibre of object " << x << ": total mass "
         << gw::scalar_traits<S>::to_string(total) << ", support size "
         << sys.at(x).support_size() << "\n";
    }
  }
  return os.str();
}

template <class S>
gw::EquivariantOperator<S> make_operator(gw::GroupoidPtr g,
                                         gw::FibredSystem<S> sys,
                                         const gw::Tolerance& tol) {
  if (!gw::is_probability_system(*g, sys, tol)) {
    throw gw::OperatorError(probability_diagnostic(*g, sys));
  }
  return gw::EquivariantOperator<S>(std::move(g), std::move(sys), tol);
}

// ---------------------------------------------------------------- check --

struct CheckOptions {
  std::string input;
  std::string out;
};

int run_check(const CheckOptions& opt) {
  echo_config("check", {{"input", opt.input}});
  const gw::FiniteGroupoid g = gw::load_groupoid(opt.input);
  const gw::AxiomReport report = verify_axioms(g);
  const std::string text = report.summary() + "\n";
  if (opt.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(opt.out, text);
  }
  return report.ok() ? 0 : 1;
}

// ---------------------------------------------------------- discrepancy --

struct DiscrepancyOptions {
  std::string groupoid;
  std::string system;
  std::string arith = "exact";
  double tolerance = 1e-9;
  std::string out;
};

template <class S>
int run_discrepancy_impl(const DiscrepancyOptions& opt) {
  auto g = std::make_shared<const gw::FiniteGroupoid>(gw::load_groupoid(opt.groupoid));
  auto op = make_operator<S>(g, load_system<S>(opt.system, *g),
                             gw::Tolerance{opt.tolerance});
  const std::vector<S> profile = gw::discrepancy_profile(op);
  if (!opt.out.empty()) {
    write_csv_file(opt.out,
                   [&](std::ostream& os) { gw::write_discrepancy_csv(os, *g, profile); });
  } else {
    gw::write_discrepancy_csv(std::cout, *g, profile);
  }
  const auto ref = gw::reference_measure<S>(*g);
  std::cout << "mean discrepancy Delta(ref, P) = "
            << gw::scalar_traits<S>::to_string(
                   gw::mean_discrepancy_with_profile(ref, profile))
            << "\n";
  return 0;
}

int run_discrepancy(const DiscrepancyOptions& opt) {
  echo_config("discrepancy", {{"groupoid", opt.groupoid},
                              {"system", opt.system},
                              {"arith", opt.arith},
                              {"out", opt.out.empty() ? "-" : opt.out}});
  return is_exact(opt.arith) ? run_discrepancy_impl<gw::Rational>(opt)
                             : run_discrepancy_impl<double>(opt);
}

// -------------------------------------------------------------- convolve --

struct ConvolveOptions {
  std::string groupoid;
  std::string left;
  std::string right;
  std::string arith = "exact";
  double tolerance = 1e-9;
  std::string out;
};

template <class S>
int run_convolve_impl(const ConvolveOptions& opt) {
  auto g = std::make_shared<const gw::FiniteGroupoid>(gw::load_groupoid(opt.groupoid));
  const auto left = load_system<S>(opt.left, *g);
  const auto right = load_system<S>(opt.right, *g);
  const auto out = gw::convolve(*g, left, right);
  const std::string text = gw::write_system_json(out);
  if (opt.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(opt.out, text);
  }
  return 0;
}

int run_convolve(const ConvolveOptions& opt) {
  echo_config("convolve", {{"groupoid", opt.groupoid},
                           {"left", opt.left},
                           {"right", opt.right},
                           {"arith", opt.arith}});
  return is_exact(opt.arith) ? run_convolve_impl<gw::Rational>(opt)
                             : run_convolve_impl<double>(opt);
}

// --------------------------------------------------- construct-liouville --

struct LiouvilleOptions {
  std::string groupoid;
  std::string provider = "growing";
  std::string system;
  int stages = 3;
  std::string epsilon_base = "1/2";
  std::string t_base = "1/2";
  long horizon = 64;
  std::size_t product_cap = 100000;
  std::string arith = "exact";
  double tolerance = 1e-9;
  std::string csv;
  std::string report;
  std::string system_out;
};

template <class S>
int run_liouville_impl(const LiouvilleOptions& opt) {
  auto g = std::make_shared<const gw::FiniteGroupoid>(gw::load_groupoid(opt.groupoid));
  const gw::Tolerance tol{opt.tolerance};

  std::optional<gw::OperatorProvider<S>> provider;
  if (opt.provider == "growing") {
    provider.emplace(gw::growing_uniform_provider<S>(g, opt.horizon));
  } else if (opt.provider == "powers" || opt.provider == "cesaro") {
    if (opt.system.empty()) {
      throw UsageError("--provider " + opt.provider + " needs --system");
    }
    auto base = make_operator<S>(g, load_system<S>(opt.system, *g), tol);
    provider.emplace(opt.provider == "powers"
                         ? gw::power_provider(base, opt.horizon)
                         : gw::cesaro_provider(base, opt.horizon));
  } else {
    throw UsageError("--provider must be growing, powers, or cesaro");
  }

  const auto schedule = gw::build_schedule<S>(
      opt.stages, parse_fraction<S>(opt.t_base), parse_fraction<S>(opt.epsilon_base));
  const auto ref = gw::reference_measure<S>(*g);
  auto result =
      gw::construct_liouville(*provider, ref, schedule, {opt.product_cap});

  std::ostringstream report;
  gw::write_certificate_report(report, result.certificate);
  const auto verdict =
      gw::verify_certificate(result.combined, ref, schedule, result.certificate, tol);
  report << "independent verification: " << (verdict.ok ? "ok" : "FAILED") << "\n"
         << verdict.report;

  if (!opt.csv.empty()) {
    write_csv_file(opt.csv, [&](std::ostream& os) {
      gw::write_certificate_csv(os, result.certificate);
    });
  }
  if (!opt.system_out.empty()) {
    write_text_file(opt.system_out, gw::write_system_json(result.combined.system()));
  }
  if (opt.report.empty()) {
    std::cout << report.str();
  } else {
    write_text_file(opt.report, report.str());
    std::cout << "certificate verification: " << (verdict.ok ? "ok" : "FAILED")
              << "\n";
  }
  return verdict.ok ? 0 : 1;
}

int run_liouville(const LiouvilleOptions& opt) {
  echo_config("construct-liouville",
              {{"groupoid", opt.groupoid},
               {"provider", opt.provider},
               {"stages", std::to_string(opt.stages)},
               {"t-base", opt.t_base},
               {"epsilon-base", opt.epsilon_base},
               {"horizon", std::to_string(opt.horizon)},
               {"product-cap", std::to_string(opt.product_cap)},
               {"arith", opt.arith}});
  return is_exact(opt.arith) ? run_liouville_impl<gw::Rational>(opt)
                             : run_liouville_impl<double>(opt);
}

// -------------------------------------------------------------- boundary --

struct BoundaryOptions {
  std::string groupoid;
  std::string system;
  std::string mode = "tail";
  long horizon = 50;
  double threshold = 1e-6;
  std::string kappa;
  int object = -1;
  std::string arith = "exact";
  double tolerance = 1e-9;
  std::string out;
};

gw::BoundaryMode parse_mode(const std::string& mode) {
  if (mode == "tail") return gw::BoundaryMode::tail;
  if (mode == "cesaro") return gw::BoundaryMode::cesaro;
  if (mode == "lazy") return gw::BoundaryMode::lazy;
  throw UsageError("--mode must be tail, cesaro, or lazy");
}

template <class S>
int run_boundary_impl(const BoundaryOptions& opt) {
  auto g = std::make_shared<const gw::FiniteGroupoid>(gw::load_groupoid(opt.groupoid));
  auto op = make_operator<S>(g, load_system<S>(opt.system, *g),
                             gw::Tolerance{opt.tolerance});
  const gw::BoundaryMode mode = parse_mode(opt.mode);

  if (opt.object >= 0) {
    if (opt.object >= g->object_count()) {
      throw UsageError("--object out of range");
    }
    const auto profile =
        gw::exit_triviality_profile(op, opt.object, opt.horizon, mode, opt.threshold);
    if (!opt.out.empty()) {
      write_csv_file(opt.out,
                     [&](std::ostream& os) { gw::write_profile_csv(os, profile); });
    } else {
      gw::write_profile_csv(std::cout, profile);
    }
    std::cout << "object " << opt.object << " verdict: "
              << gw::to_string(profile.verdict) << "\n";
    return 0;
  }

  const auto kappa = opt.kappa.empty()
                         ? gw::ObjectMeasure<S>::uniform(g->object_count())
                         : load_kappa<S>(opt.kappa, g->object_count());
  const auto report = gw::fibrewise_report(op, kappa, opt.horizon, mode, opt.threshold);
  std::ostringstream os;
  gw::write_fibrewise_report(os, report);
  if (opt.out.empty()) {
    std::cout << os.str();
  } else {
    write_text_file(opt.out, os.str());
  }
  return 0;
}

int run_boundary(const BoundaryOptions& opt) {
  echo_config("boundary", {{"groupoid", opt.groupoid},
                           {"system", opt.system},
                           {"mode", opt.mode},
                           {"horizon", std::to_string(opt.horizon)},
                           {"threshold", gw::scalar_traits<double>::to_string(opt.threshold)},
                           {"arith", opt.arith}});
  return is_exact(opt.arith) ? run_boundary_impl<gw::Rational>(opt)
                             : run_boundary_impl<double>(opt);
}

// ----------------------------------------------------------- group walks --

enum class GroupKind { integers, cyclic, free2 };

struct GroupChoice {
  GroupKind kind = GroupKind::integers;
  int order = 0;
};

GroupChoice parse_group(const std::string& text) {
  if (text == "z") return {GroupKind::integers, 0};
  if (text == "f2") return {GroupKind::free2, 0};
  if (text.rfind("zn:", 0) == 0) {
    try {
      const int order = std::stoi(text.substr(3));
      if (order < 1) throw UsageError("cyclic order must be positive");
      return {GroupKind::cyclic, order};
    } catch (const std::logic_error&) {
      throw UsageError("cannot parse group '" + text + "'");
    }
  }
  throw UsageError("--group must be z, zn:<n>, or f2");
}

json parse_json_literal(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw UsageError("'" + text + "' is not valid JSON");
  return j;
}

long long elem_as_int(const json& j) {
  if (!j.is_number_integer()) throw UsageError("expected an integer group element");
  return j.get<long long>();
}

std::string elem_as_word(const json& j) {
  if (!j.is_string()) throw UsageError("expected a reduced word group element");
  const std::string raw = j.get<std::string>();
  return gw::FreeGroup2::canonicalize(raw == "e" ? "" : raw);
}

// Measure literals are [[element, num, den], ...].
template <class Group, class S, class ElemFn>
gw::GroupMeasure<Group, S> parse_measure_literal(const std::string& text,
                                                 ElemFn&& elem_fn) {
  const json j = parse_json_literal(text);
  if (!j.is_array() || j.empty()) throw UsageError("measure literal must be a non-empty array");
  gw::GroupMeasure<Group, S> out;
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 3 || !entry[1].is_number_integer() ||
        !entry[2].is_number_integer()) {
      throw UsageError("measure entries must be [element, num, den]");
    }
    out.add(elem_fn(entry[0]),
            gw::scalar_traits<S>::from_ratio(entry[1].get<long long>(),
                                             entry[2].get<long long>()));
  }
  return out;
}

struct SweepOptions {
  std::string group = "z";
  std::string measure;
  std::string probe;
  long horizon = 64;
  std::size_t support_cap = 1000000;
  std::string arith = "exact";
  std::string out;
};

template <class Group, class S, class ElemFn>
int run_sweep_with(const SweepOptions& opt, const Group& group, ElemFn&& elem_fn) {
  const auto mu = parse_measure_literal<Group, S>(opt.measure, elem_fn);
  if (!gw::is_probability(mu)) {
    throw gw::GroupWalkError("sweep measure must be a probability measure");
  }
  const auto probe = elem_fn(parse_json_literal(opt.probe));
  const auto sweep =
      gw::convolution_power_sweep(mu, opt.horizon, probe, group, opt.support_cap);
  if (!opt.out.empty()) {
    write_csv_file(opt.out,
                   [&](std::ostream& os) { gw::write_sweep_csv(os, sweep.values); });
  } else {
    gw::write_sweep_csv(std::cout, sweep.values);
  }
  if (sweep.truncated_at) {
    std::cout << "support cap " << opt.support_cap << " hit at n = "
              << *sweep.truncated_at << "; values reported up to n = "
              << sweep.values.size() << "\n";
  }
  return 0;
}

template <class S>
int run_sweep_impl(const SweepOptions& opt) {
  const GroupChoice choice = parse_group(opt.group);
  switch (choice.kind) {
    case GroupKind::integers:
      return run_sweep_with<gw::IntegerGroup, S>(
          opt, gw::IntegerGroup{}, [](const json& j) { return elem_as_int(j); });
    case GroupKind::cyclic: {
      gw::CyclicGroup group(choice.order);
      return run_sweep_with<gw::CyclicGroup, S>(opt, group, [group](const json& j) {
        return group.canonicalize(static_cast<int>(elem_as_int(j)));
      });
    }
    default:
      return run_sweep_with<gw::FreeGroup2, S>(
          opt, gw::FreeGroup2{}, [](const json& j) { return elem_as_word(j); });
  }
}

int run_sweep(const SweepOptions& opt) {
  echo_config("group-sweep", {{"group", opt.group},
                              {"measure", opt.measure},
                              {"probe", opt.probe},
                              {"horizon", std::to_string(opt.horizon)},
                              {"support-cap", std::to_string(opt.support_cap)},
                              {"arith", opt.arith}});
  return is_exact(opt.arith) ? run_sweep_impl<gw::Rational>(opt)
                             : run_sweep_impl<double>(opt);
}

struct FolnerOptions {
  std::string group = "z";
  std::string set;
  int ball = -1;
  std::string ref;
  std::string arith = "exact";
};

template <class Group, class S, class ElemFn>
int run_folner_with(const FolnerOptions& opt, const Group& group, ElemFn&& elem_fn) {
  std::vector<typename Group::Elem> set;
  if (!opt.set.empty()) {
    const json j = parse_json_literal(opt.set);
    if (!j.is_array()) throw UsageError("--set must be a JSON array");
    for (const auto& entry : j) set.push_back(elem_fn(entry));
  } else if (opt.ball >= 0) {
    if constexpr (std::is_same_v<Group, gw::FreeGroup2>) {
      set = gw::FreeGroup2::ball(opt.ball);
    } else {
      throw UsageError("--ball is only available for the free group");
    }
  } else {
    throw UsageError("folner needs --set or --ball");
  }
  const auto ref = parse_measure_literal<Group, S>(opt.ref, elem_fn);
  const S via_counting = gw::folner_measure_test(ref, set, group);
  const S via_tv = gw::group_discrepancy(ref, gw::uniform_on<Group, S>(set, group), group);
  std::cout << "Delta(ref, chi_A) = " << gw::scalar_traits<S>::to_string(via_counting)
            << "\n";
  std::cout << "direct total variation route = "
            << gw::scalar_traits<S>::to_string(via_tv) << "\n";
  std::cout << "routes agree: " << (via_counting == via_tv ? "yes" : "NO") << "\n";
  return 0;
}

template <class S>
int run_folner_impl(const FolnerOptions& opt) {
  const GroupChoice choice = parse_group(opt.group);
  switch (choice.kind) {
    case GroupKind::integers:
      return run_folner_with<gw::IntegerGroup, S>(
          opt, gw::IntegerGroup{}, [](const json& j) { return elem_as_int(j); });
    case GroupKind::cyclic: {
      gw::CyclicGroup group(choice.order);
      return run_folner_with<gw::CyclicGroup, S>(opt, group, [group](const json& j) {
        return group.canonicalize(static_cast<int>(elem_as_int(j)));
      });
    }
    default:
      return run_folner_with<gw::FreeGroup2, S>(
          opt, gw::FreeGroup2{}, [](const json& j) { return elem_as_word(j); });
  }
}

int run_folner(const FolnerOptions& opt) {
  echo_config("folner", {{"group", opt.group},
                         {"set", opt.set.empty() ? "ball:" + std::to_string(opt.ball)
                                                 : opt.set},
                         {"ref", opt.ref},
                         {"arith", opt.arith}});
  return is_exact(opt.arith) ? run_folner_impl<gw::Rational>(opt)
                             : run_folner_impl<double>(opt);
}

// ------------------------------------------------------------------ rwre --

struct RwreSimulateOptions {
  std::string action;
  std::string theta;
  int point = 0;
  int start = 0;
  long steps = 5;
  long samples = 100000;
  std::uint64_t seed = 1;
  std::string arith = "float";
  std::string out;
  long log_paths = 0;
  std::string paths_out;
};

template <class S>
int run_rwre_simulate_impl(const RwreSimulateOptions& opt) {
  const gw::ActionSpec spec = gw::load_action_spec(opt.action);
  const auto theta =
      load_pointwise<S>(opt.theta, spec.space_size(), spec.group_size());
  for (const auto& mu : theta) {
    if (!gw::is_probability(mu)) {
      throw gw::RwreError("theta must assign a probability measure to every point");
    }
  }
  if (opt.point < 0 || opt.point >= spec.space_size()) {
    throw UsageError("--point out of range");
  }
  if (opt.start < 0 || opt.start >= spec.group_size()) {
    throw UsageError("--start out of range");
  }
  const auto env = gw::environment_of(theta, opt.point, spec);
  const auto exact = gw::exact_step_distribution(env, opt.start, opt.steps);
  const auto counts =
      gw::sample_rwre_histogram(env, opt.start, opt.steps, opt.samples, opt.seed);
  if (!opt.out.empty()) {
    write_csv_file(opt.out, [&](std::ostream& os) {
      gw::write_histogram_csv(os, counts, exact, opt.samples);
    });
  } else {
    gw::write_histogram_csv(std::cout, counts, exact, opt.samples);
  }
  if (opt.log_paths > 0) {
    std::ostringstream os;
    for (long i = 0; i < opt.log_paths; ++i) {
      const auto path = gw::sample_rwre_path(
          env, opt.start, opt.steps, gw::SeededRng::mix(opt.seed, i));
      os << "seed=" << path.seed << " states=";
      for (std::size_t k = 0; k < path.states.size(); ++k) {
        if (k) os << " ";
        os << path.states[k];
      }
      os << "\n";
    }
    if (opt.paths_out.empty()) {
      std::cout << os.str();
    } else {
      write_text_file(opt.paths_out, os.str());
    }
  }
  return 0;
}

int run_rwre_simulate(const RwreSimulateOptions& opt) {
  echo_config("rwre-simulate", {{"action", opt.action},
                                {"theta", opt.theta},
                                {"point", std::to_string(opt.point)},
                                {"start", std::to_string(opt.start)},
                                {"steps", std::to_string(opt.steps)},
                                {"samples", std::to_string(opt.samples)},
                                {"seed", std::to_string(opt.seed)},
                                {"arith", opt.arith}});
  return is_exact(opt.arith) ? run_rwre_simulate_impl<gw::Rational>(opt)
                             : run_rwre_simulate_impl<double>(opt);
}

struct RwreReportOptions {
  std::string action;
  std::string theta;
  std::string mode = "tail";
  long horizon = 50;
  double threshold = 1e-6;
  std::string kappa;
  std::string arith = "exact";
  std::string out;
};

template <class S>
int run_rwre_report_impl(const RwreReportOptions& opt) {
  const gw::ActionSpec spec = gw::load_action_spec(opt.action);
  const auto theta =
      load_pointwise<S>(opt.theta, spec.space_size(), spec.group_size());
  const auto kappa = opt.kappa.empty()
                         ? gw::ObjectMeasure<S>::uniform(spec.space_size())
                         : load_kappa<S>(opt.kappa, spec.space_size());
  const auto report = gw::rwre_tail_report(spec, theta, kappa, opt.horizon,
                                           parse_mode(opt.mode), opt.threshold);
  std::ostringstream os;
  os << "environments indexed by orbit point; profile at x is the walk in "
        "env_theta(x)\n";
  gw::write_fibrewise_report(os, report);
  if (opt.out.empty()) {
    std::cout << os.str();
  } else {
    write_text_file(opt.out, os.str());
  }
  return 0;
}

int run_rwre_report(const RwreReportOptions& opt) {
  echo_config("rwre-report", {{"action", opt.action},
                              {"theta", opt.theta},
                              {"mode", opt.mode},
                              {"horizon", std::to_string(opt.horizon)},
                              {"arith", opt.arith}});
  return is_exact(opt.arith) ? run_rwre_report_impl<gw::Rational>(opt)
                             : run_rwre_report_impl<double>(opt);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equivariant Markov chains on finite groupoids: axiom checks, "
               "discrepancy sweeps, Liouville constructions, boundary "
               "triviality reports, group walks, and RWRE simulation"};
  app.require_subcommand(1);

  CheckOptions check_opt;
  auto* check = app.add_subcommand("check", "verify the groupoid axioms of a description file");
  check->add_option("--input", check_opt.input, "groupoid description JSON")->required();
  check->add_option("--out", check_opt.out, "write the report to a file");

  DiscrepancyOptions disc_opt;
  auto* disc = app.add_subcommand("discrepancy", "per-morphism discrepancy profile of an operator");
  disc->add_option("--groupoid", disc_opt.groupoid, "groupoid description JSON")->required();
  disc->add_option("--system", disc_opt.system, "fibred probability system JSON")->required();
  disc->add_option("--arith", disc_opt.arith, "exact or float");
  disc->add_option("--tolerance", disc_opt.tolerance, "float mode tolerance");
  disc->add_option("--out", disc_opt.out, "CSV output path");

  ConvolveOptions conv_opt;
  auto* conv = app.add_subcommand("convolve", "convolution of two fibred systems");
  conv->add_option("--groupoid", conv_opt.groupoid)->required();
  conv->add_option("--left", conv_opt.left, "left system JSON")->required();
  conv->add_option("--right", conv_opt.right, "right system JSON")->required();
  conv->add_option("--arith", conv_opt.arith, "exact or float");
  conv->add_option("--out", conv_opt.out, "system JSON output path");

  LiouvilleOptions liou_opt;
  auto* liou = app.add_subcommand(
      "construct-liouville",
      "select a convex combination of a provider sequence whose powers stay "
      "asymptotically invariant, with a checkable certificate");
  liou->add_option("--groupoid", liou_opt.groupoid)->required();
  liou->add_option("--provider", liou_opt.provider, "growing, powers, or cesaro");
  liou->add_option("--system", liou_opt.system, "base system for powers/cesaro providers");
  liou->add_option("--stages", liou_opt.stages, "materialized stages");
  liou->add_option("--epsilon-base", liou_opt.epsilon_base, "epsilon_i = base^i");
  liou->add_option("--t-base", liou_opt.t_base, "t_i = (1-base) base^{i-1}");
  liou->add_option("--horizon", liou_opt.horizon, "provider horizon");
  liou->add_option("--product-cap", liou_opt.product_cap, "product enumeration cap");
  liou->add_option("--arith", liou_opt.arith, "exact or float");
  liou->add_option("--tolerance", liou_opt.tolerance, "float mode tolerance");
  liou->add_option("--csv", liou_opt.csv, "certificate CSV output path");
  liou->add_option("--report", liou_opt.report, "text report output path");
  liou->add_option("--system-out", liou_opt.system_out,
                   "write the combined operator's system JSON");

  BoundaryOptions bound_opt;
  auto* bound = app.add_subcommand("boundary", "0-2-law decay profiles and fibrewise verdicts");
  bound->add_option("--groupoid", bound_opt.groupoid)->required();
  bound->add_option("--system", bound_opt.system)->required();
  bound->add_option("--mode", bound_opt.mode, "tail, cesaro, or lazy");
  bound->add_option("--horizon", bound_opt.horizon);
  bound->add_option("--threshold", bound_opt.threshold);
  bound->add_option("--kappa", bound_opt.kappa, "object measure JSON");
  bound->add_option("--object", bound_opt.object, "profile a single object");
  bound->add_option("--arith", bound_opt.arith, "exact or float");
  bound->add_option("--tolerance", bound_opt.tolerance, "float mode tolerance");
  bound->add_option("--out", bound_opt.out, "output path");

  SweepOptions sweep_opt;
  auto* sweep = app.add_subcommand("group-sweep", "discrepancy sweep of convolution powers");
  sweep->add_option("--group", sweep_opt.group, "z, zn:<n>, or f2")->required();
  sweep->add_option("--measure", sweep_opt.measure, "[[element, num, den], ...]")->required();
  sweep->add_option("--probe", sweep_opt.probe, "probe element (JSON literal)")->required();
  sweep->add_option("--horizon", sweep_opt.horizon);
  sweep->add_option("--support-cap", sweep_opt.support_cap);
  sweep->add_option("--arith", sweep_opt.arith, "exact or float");
  sweep->add_option("--out", sweep_opt.out, "CSV output path");

  FolnerOptions folner_opt;
  auto* folner = app.add_subcommand("folner", "measure form of the Folner test");
  folner->add_option("--group", folner_opt.group, "z, zn:<n>, or f2")->required();
  folner->add_option("--set", folner_opt.set, "JSON array of elements");
  folner->add_option("--ball", folner_opt.ball, "free group ball radius");
  folner->add_option("--ref", folner_opt.ref, "reference measure literal")->required();
  folner->add_option("--arith", folner_opt.arith, "exact or float");

  auto* rwre = app.add_subcommand("rwre", "random walks in random environment");
  rwre->require_subcommand(1);

  RwreSimulateOptions sim_opt;
  auto* sim = rwre->add_subcommand("simulate", "seeded Monte Carlo vs exact distribution");
  sim->add_option("--action", sim_opt.action, "action groupoid JSON")->required();
  sim->add_option("--theta", sim_opt.theta, "pointwise step distributions JSON")->required();
  sim->add_option("--point", sim_opt.point, "orbit point with the environment");
  sim->add_option("--start", sim_opt.start, "starting group element")->required();
  sim->add_option("--steps", sim_opt.steps)->required();
  sim->add_option("--samples", sim_opt.samples)->required();
  sim->add_option("--seed", sim_opt.seed)->required();
  sim->add_option("--arith", sim_opt.arith, "exact or float");
  sim->add_option("--out", sim_opt.out, "histogram CSV output path");
  sim->add_option("--log-paths", sim_opt.log_paths, "log the first N path samples");
  sim->add_option("--paths-out", sim_opt.paths_out, "path log output file");

  RwreReportOptions rep_opt;
  auto* rep = rwre->add_subcommand("report", "boundary triviality per environment");
  rep->add_option("--action", rep_opt.action)->required();
  rep->add_option("--theta", rep_opt.theta)->required();
  rep->add_option("--mode", rep_opt.mode, "tail, cesaro, or lazy");
  rep->add_option("--horizon", rep_opt.horizon);
  rep->add_option("--threshold", rep_opt.threshold);
  rep->add_option("--kappa", rep_opt.kappa, "object measure JSON");
  rep->add_option("--arith", rep_opt.arith, "exact or float");
  rep->add_option("--out", rep_opt.out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*check) return run_check(check_opt);
    if (*disc) return run_discrepancy(disc_opt);
    if (*conv) return run_convolve(conv_opt);
    if (*liou) return run_liouville(liou_opt);
    if (*bound) return run_boundary(bound_opt);
    if (*sweep) return run_sweep(sweep_opt);
    if (*folner) return run_folner(folner_opt);
    if (*rwre) {
      if (*sim) return run_rwre_simulate(sim_opt);
      if (*rep) return run_rwre_report(rep_opt);
    }
    throw UsageError("no subcommand selected");
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
