#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gw/amenability.hpp"
#include "gw/boundary.hpp"
#include "gw/group_walks.hpp"
#include "gw/measure.hpp"
#include "gw/operators.hpp"
#include "gw/rwre.hpp"

namespace gw {

class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

std::string read_file(const std::string& path);

// Groupoid description files: {"kind": "action" | "pair" | "table", ...}.
// Unknown kinds are rejected. All indices are 0-based.
FiniteGroupoid parse_groupoid(const std::string& json_text);
FiniteGroupoid load_groupoid(const std::string& path);

// Returns the action spec of an action-kind description; throws for other
// kinds (the rwre pipelines need the raw action, not just the groupoid).
ActionSpec parse_action_spec(const std::string& json_text);
ActionSpec load_action_spec(const std::string& path);

// Fibred system files: {"system": [{"object": i, "masses": [[id, num, den],
// ...]}, ...]}. Exact parsing rejects entries that are not integer ratios;
// float parsing additionally accepts [id, mass] with a fractional mass.
FibredSystem<Rational> parse_system_exact(const std::string& json_text,
                                          const FiniteGroupoid& g);
FibredSystem<double> parse_system_float(const std::string& json_text,
                                        const FiniteGroupoid& g);

// Same schema with group elements instead of morphism ids: the per-point
// step distributions of an rwre theta file.
PointwiseSystem<Rational> parse_pointwise_exact(const std::string& json_text,
                                                int space_size, int group_size);
PointwiseSystem<double> parse_pointwise_float(const std::string& json_text,
                                              int space_size, int group_size);

// Object measures as a JSON array of masses, one per object; entries are
// numbers or [num, den] pairs.
ObjectMeasure<Rational> parse_object_measure_exact(const std::string& json_text,
                                                   int object_count);
ObjectMeasure<double> parse_object_measure_float(const std::string& json_text,
                                                 int object_count);

template <class S>
FibredSystem<double> system_to_double(const FibredSystem<S>& sys) {
  FibredSystem<double> out(sys.size());
  for (ObjectId x = 0; x < sys.size(); ++x) {
    for (const auto& [m, v] : sys.at(x).weights()) {
      out.at(x).set(m, scalar_traits<S>::to_double(v));
    }
  }
  return out;
}

// System serialization in the exact schema; rationals must fit into the
// int64 num/den fields of the format.
std::string write_system_json(const FibredSystem<Rational>& sys);
std::string write_system_json(const FibredSystem<double>& sys);

template <class S>
void write_measure_csv(std::ostream& os, const Measure<S>& m) {
  os << "morphismId,mass\n";
  for (const auto& [mor, v] : m.weights()) {
    os << mor << "," << scalar_traits<S>::to_string(v) << "\n";
  }
}

template <class S>
void write_discrepancy_csv(std::ostream& os, const FiniteGroupoid& g,
                           const std::vector<S>& profile) {
  os << "morphismId,sourceObject,targetObject,delta\n";
  for (MorphismId m = 0; m < g.morphism_count(); ++m) {
    os << m << "," << g.source(m) << "," << g.target(m) << ","
       << scalar_traits<S>::to_string(profile[m]) << "\n";
  }
}

template <class S>
void write_profile_csv(std::ostream& os, const DecayProfile<S>& profile) {
  os << "n,d_n\n";
  for (std::size_t i = 0; i < profile.values.size(); ++i) {
    os << i + 1 << "," << scalar_traits<S>::to_string(profile.values[i]) << "\n";
  }
}

template <class S>
void write_certificate_csv(std::ostream& os, const LiouvilleCertificate<S>& cert) {
  os << "stage,n_i,k_i,epsilon_i,measured,bound\n";
  for (const auto& check : cert.checks) {
    os << check.stage << "," << check.n << "," << check.k << ","
       << scalar_traits<S>::to_string(check.epsilon) << ","
       << scalar_traits<S>::to_string(check.measured) << ","
       << scalar_traits<S>::to_string(check.bound) << "\n";
  }
}

template <class S>
void write_sweep_csv(std::ostream& os, const std::vector<S>& values) {
  os << "n,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    os << i + 1 << "," << scalar_traits<S>::to_string(values[i]) << "\n";
  }
}

template <class S>
void write_histogram_csv(std::ostream& os, const std::vector<std::uint64_t>& counts,
                         const FiniteGroupMeasure<S>& exact, long samples) {
  os << "element,empiricalMass,exactMass,absDiff\n";
  for (std::size_t g = 0; g < counts.size(); ++g) {
    const double empirical =
        static_cast<double>(counts[g]) / static_cast<double>(samples);
    const double expected =
        scalar_traits<S>::to_double(exact.at(static_cast<int>(g)));
    os << g << "," << scalar_traits<double>::to_string(empirical) << ","
       << scalar_traits<double>::to_string(expected) << ","
       << scalar_traits<double>::to_string(std::fabs(empirical - expected)) << "\n";
  }
}

template <class S>
void write_fibrewise_report(std::ostream& os, const FibrewiseReport<S>& report) {
  os << "fibrewise boundary report (mode: " << to_string(report.mode) << ")\n";
  os << "quasi-substationary initial measures: "
     << (report.quasi_substationary ? "yes" : "no") << "\n";
  for (const auto& profile : report.per_object) {
    os << "object " << profile.object << ": verdict " << to_string(profile.verdict);
    if (!profile.values.empty()) {
      os << ", d_" << profile.values.size() << " = "
         << scalar_traits<S>::to_string(profile.values.back());
    }
    os << "\n";
  }
  os << "aggregate trivial kappa-mass: "
     << scalar_traits<S>::to_string(report.aggregate) << "\n";
}

template <class S>
void write_certificate_report(std::ostream& os, const LiouvilleCertificate<S>& cert) {
  os << "liouville combination certificate\n";
  os << "selected indices:";
  for (long n : cert.indices) os << " " << n;
  os << "\nweights:";
  for (const auto& w : cert.weights) os << " " << scalar_traits<S>::to_string(w);
  os << "\ntruncation residual: "
     << scalar_traits<S>::to_string(cert.truncation_residual) << "\n";
  for (const auto& check : cert.checks) {
    os << "stage " << check.stage << ": n=" << check.n << " k=" << check.k
       << " epsilon=" << scalar_traits<S>::to_string(check.epsilon)
       << " measured Delta(ref, P^k)=" << scalar_traits<S>::to_string(check.measured)
       << " bound=" << scalar_traits<S>::to_string(check.bound)
       << (check.ok ? " ok" : " VIOLATED") << "\n";
  }
  os << "selection scans: " << cert.scans.size() << " candidate(s) inspected\n";
  for (const auto& scan : cert.scans) {
    os << "  stage " << scan.stage << " n=" << scan.candidate << " products="
       << scan.products << " worst=" << scalar_traits<S>::to_string(scan.worst)
       << (scan.accepted ? " accepted" : " rejected") << "\n";
  }
}

}  // namespace gw
