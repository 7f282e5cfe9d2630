#include "gw/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace gw {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw SchemaError("input is not valid JSON");
  return j;
}

std::vector<std::vector<int>> int_matrix(const json& j, const std::string& field) {
  if (!j.is_array()) throw SchemaError("field '" + field + "' must be an array");
  std::vector<std::vector<int>> out;
  for (const auto& row : j) {
    if (!row.is_array()) throw SchemaError("field '" + field + "' must be a matrix");
    std::vector<int> r;
    for (const auto& v : row) {
      if (!v.is_number_integer()) {
        throw SchemaError("field '" + field + "' must contain integers");
      }
      r.push_back(v.get<int>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<int> int_vector(const json& j, const std::string& field) {
  if (!j.is_array()) throw SchemaError("field '" + field + "' must be an array");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) {
      throw SchemaError("field '" + field + "' must contain integers");
    }
    out.push_back(v.get<int>());
  }
  return out;
}

const json& require(const json& j, const std::string& field) {
  auto it = j.find(field);
  if (it == j.end()) throw SchemaError("missing field '" + field + "'");
  return *it;
}

// Mass entries are [id, num, den] (always) or [id, mass] (float mode only).
template <class S>
std::pair<int, S> parse_mass_entry(const json& entry, bool allow_float) {
  if (!entry.is_array() || entry.size() < 2 || entry.size() > 3 ||
      !entry[0].is_number_integer()) {
    throw SchemaError("mass entries must be [id, num, den] or [id, mass]");
  }
  const int id = entry[0].get<int>();
  if (entry.size() == 3) {
    if (!entry[1].is_number_integer() || !entry[2].is_number_integer()) {
      throw SchemaError("ratio masses must have integer numerator and denominator");
    }
    const long long num = entry[1].get<long long>();
    const long long den = entry[2].get<long long>();
    if (den <= 0) throw SchemaError("mass denominators must be positive");
    if (num < 0) throw SchemaError("masses must be non-negative");
    return {id, scalar_traits<S>::from_ratio(num, den)};
  }
  if (!allow_float) {
    throw SchemaError("exact mode rejects float-only mass entries; "
                      "use [id, num, den]");
  }
  if (!entry[1].is_number()) throw SchemaError("mass must be a number");
  const double mass = entry[1].get<double>();
  if (mass < 0) throw SchemaError("masses must be non-negative");
  return {id, scalar_traits<S>::from_double(mass)};
}

template <class S>
FibredSystem<S> parse_system_impl(const std::string& text, const FiniteGroupoid& g,
                                  bool allow_float) {
  const json j = parse_json(text);
  const json& entries = require(j, "system");
  if (!entries.is_array()) throw SchemaError("'system' must be an array");
  FibredSystem<S> sys(g.object_count());
  for (const auto& item : entries) {
    const json& object = require(item, "object");
    if (!object.is_number_integer()) throw SchemaError("'object' must be an integer");
    const int x = object.get<int>();
    if (x < 0 || x >= g.object_count()) {
      throw SchemaError("object " + std::to_string(x) + " out of range");
    }
    for (const auto& entry : require(item, "masses")) {
      auto [id, mass] = parse_mass_entry<S>(entry, allow_float);
      if (id < 0 || id >= g.morphism_count()) {
        throw SchemaError("morphism id " + std::to_string(id) + " out of range");
      }
      if (g.target(id) != x) {
        throw SchemaError("morphism " + std::to_string(id) +
                          " does not belong to the fibre of object " +
                          std::to_string(x));
      }
      sys.at(x).add(id, mass);
    }
  }
  return sys;
}

template <class S>
PointwiseSystem<S> parse_pointwise_impl(const std::string& text, int space_size,
                                        int group_size, bool allow_float) {
  const json j = parse_json(text);
  const json& entries = require(j, "system");
  if (!entries.is_array()) throw SchemaError("'system' must be an array");
  PointwiseSystem<S> theta(space_size);
  for (const auto& item : entries) {
    const json& object = require(item, "object");
    if (!object.is_number_integer()) throw SchemaError("'object' must be an integer");
    const int x = object.get<int>();
    if (x < 0 || x >= space_size) {
      throw SchemaError("object " + std::to_string(x) + " out of range");
    }
    for (const auto& entry : require(item, "masses")) {
      auto [elem, mass] = parse_mass_entry<S>(entry, allow_float);
      if (elem < 0 || elem >= group_size) {
        throw SchemaError("group element " + std::to_string(elem) + " out of range");
      }
      theta[x].add(elem, mass);
    }
  }
  return theta;
}

template <class S>
ObjectMeasure<S> parse_object_measure_impl(const std::string& text, int object_count,
                                           bool allow_float) {
  const json j = parse_json(text);
  if (!j.is_array() || static_cast<int>(j.size()) != object_count) {
    throw SchemaError("object measure must be an array with one entry per object");
  }
  std::vector<S> weights;
  weights.reserve(object_count);
  for (const auto& entry : j) {
    if (entry.is_array()) {
      if (entry.size() != 2 || !entry[0].is_number_integer() ||
          !entry[1].is_number_integer()) {
        throw SchemaError("ratio weights must be [num, den]");
      }
      const long long num = entry[0].get<long long>();
      const long long den = entry[1].get<long long>();
      if (den <= 0 || num < 0) throw SchemaError("weights must be non-negative ratios");
      weights.push_back(scalar_traits<S>::from_ratio(num, den));
    } else if (entry.is_number_integer()) {
      weights.push_back(scalar_traits<S>::from_ratio(entry.get<long long>(), 1));
    } else if (entry.is_number() && allow_float) {
      weights.push_back(scalar_traits<S>::from_double(entry.get<double>()));
    } else {
      throw SchemaError("object measure entries must be numbers or [num, den]");
    }
  }
  return ObjectMeasure<S>(std::move(weights));
}

ActionSpec action_spec_from_json(const json& j) {
  ActionSpec spec;
  spec.group = int_matrix(require(j, "group"), "group");
  spec.action = int_matrix(require(j, "action"), "action");
  return spec;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot read file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

FiniteGroupoid parse_groupoid(const std::string& text) {
  const json j = parse_json(text);
  const json& kind = require(j, "kind");
  if (!kind.is_string()) throw SchemaError("'kind' must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "action") {
    return build_action_groupoid(action_spec_from_json(j));
  }
  if (k == "pair") {
    PartitionSpec spec;
    for (const auto& block : require(j, "blocks")) {
      spec.blocks.push_back(int_vector(block, "blocks"));
    }
    return build_pair_groupoid(spec);
  }
  if (k == "table") {
    return FiniteGroupoid::from_tables(
        int_vector(require(j, "source"), "source"),
        int_vector(require(j, "target"), "target"),
        int_vector(require(j, "unit"), "unit"),
        int_vector(require(j, "inverse"), "inverse"),
        int_matrix(require(j, "compose"), "compose"));
  }
  throw SchemaError("unknown groupoid kind '" + k + "'");
}

FiniteGroupoid load_groupoid(const std::string& path) {
  return parse_groupoid(read_file(path));
}

ActionSpec parse_action_spec(const std::string& text) {
  const json j = parse_json(text);
  const json& kind = require(j, "kind");
  if (!kind.is_string() || kind.get<std::string>() != "action") {
    throw SchemaError("expected a groupoid description of kind 'action'");
  }
  return action_spec_from_json(j);
}

ActionSpec load_action_spec(const std::string& path) {
  return parse_action_spec(read_file(path));
}

FibredSystem<Rational> parse_system_exact(const std::string& text,
                                          const FiniteGroupoid& g) {
  return parse_system_impl<Rational>(text, g, false);
}

FibredSystem<double> parse_system_float(const std::string& text,
                                        const FiniteGroupoid& g) {
  return parse_system_impl<double>(text, g, true);
}

PointwiseSystem<Rational> parse_pointwise_exact(const std::string& text,
                                                int space_size, int group_size) {
  return parse_pointwise_impl<Rational>(text, space_size, group_size, false);
}

PointwiseSystem<double> parse_pointwise_float(const std::string& text,
                                              int space_size, int group_size) {
  return parse_pointwise_impl<double>(text, space_size, group_size, true);
}

ObjectMeasure<Rational> parse_object_measure_exact(const std::string& text,
                                                   int object_count) {
  return parse_object_measure_impl<Rational>(text, object_count, false);
}

ObjectMeasure<double> parse_object_measure_float(const std::string& text,
                                                 int object_count) {
  return parse_object_measure_impl<double>(text, object_count, true);
}

std::string write_system_json(const FibredSystem<Rational>& sys) {
  json entries = json::array();
  for (ObjectId x = 0; x < sys.size(); ++x) {
    json masses = json::array();
    for (const auto& [m, v] : sys.at(x).weights()) {
      if (!v.get_num().fits_slong_p() || !v.get_den().fits_slong_p()) {
        throw SchemaError("rational mass too large for the file format");
      }
      masses.push_back(json::array(
          {m, static_cast<long long>(v.get_num().get_si()),
           static_cast<long long>(v.get_den().get_si())}));
    }
    entries.push_back(json{{"object", x}, {"masses", std::move(masses)}});
  }
  return json{{"system", std::move(entries)}}.dump(2) + "\n";
}

std::string write_system_json(const FibredSystem<double>& sys) {
  json entries = json::array();
  for (ObjectId x = 0; x < sys.size(); ++x) {
    json masses = json::array();
    for (const auto& [m, v] : sys.at(x).weights()) {
      masses.push_back(json::array({m, v}));
    }
    entries.push_back(json{{"object", x}, {"masses", std::move(masses)}});
  }
  return json{{"system", std::move(entries)}}.dump(2) + "\n";
}

}  // namespace gw
