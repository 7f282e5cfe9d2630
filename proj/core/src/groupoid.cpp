#include "gw/groupoid.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace gw {

namespace {

std::string pair_str(int a, int b) {
  std::ostringstream os;
  os << "(" << a << ", " << b << ")";
  return os.str();
}

}  // namespace

NonComposableError::NonComposableError(MorphismId l, MorphismId r,
                                       ObjectId ls, ObjectId rt)
    : GroupoidError("non-composable pair: source(" + std::to_string(l) +
                    ") = " + std::to_string(ls) + " but target(" +
                    std::to_string(r) + ") = " + std::to_string(rt)),
      left(l),
      right(r),
      left_source(ls),
      right_target(rt) {}

std::string AxiomReport::summary() const {
  if (violations.empty()) return "all groupoid axioms hold";
  std::ostringstream os;
  os << violations.size() << " violation(s):\n";
  for (const auto& v : violations) os << "  [" << v.axiom << "] " << v.detail << "\n";
  return os.str();
}

FiniteGroupoid::FiniteGroupoid(int object_count, std::vector<ObjectId> source,
                               std::vector<ObjectId> target,
                               std::vector<MorphismId> unit,
                               std::vector<MorphismId> inverse, Composer composer)
    : object_count_(object_count),
      source_(std::move(source)),
      target_(std::move(target)),
      unit_(std::move(unit)),
      inverse_(std::move(inverse)),
      composer_(std::move(composer)) {
  build_fibres();
}

FiniteGroupoid FiniteGroupoid::from_tables(
    std::vector<ObjectId> source, std::vector<ObjectId> target,
    std::vector<MorphismId> unit, std::vector<MorphismId> inverse,
    std::vector<std::vector<MorphismId>> compose) {
  const int n = static_cast<int>(source.size());
  const int object_count = static_cast<int>(unit.size());
  DenseTable table;
  table.stride = n;
  table.entry.assign(static_cast<std::size_t>(n) * n, -1);
  for (int a = 0; a < n && a < static_cast<int>(compose.size()); ++a) {
    for (int b = 0; b < n && b < static_cast<int>(compose[a].size()); ++b) {
      table.entry[static_cast<std::size_t>(a) * n + b] = compose[a][b];
    }
  }
  return FiniteGroupoid(object_count, std::move(source), std::move(target),
                        std::move(unit), std::move(inverse), std::move(table));
}

void FiniteGroupoid::build_fibres() {
  fibres_.assign(object_count_, {});
  const int n = morphism_count();
  for (MorphismId m = 0; m < n; ++m) {
    const ObjectId x = target_[m];
    if (x >= 0 && x < object_count_) fibres_[x].push_back(m);
  }
  for (ObjectId x = 0; x < object_count_; ++x) {
    auto& f = fibres_[x];
    std::sort(f.begin(), f.end());
    if (x < static_cast<int>(unit_.size())) {
      auto it = std::find(f.begin(), f.end(), unit_[x]);
      if (it != f.end()) std::rotate(f.begin(), it, it + 1);
    }
  }
  fibre_index_.assign(n, -1);
  for (ObjectId x = 0; x < object_count_; ++x) {
    for (int i = 0; i < static_cast<int>(fibres_[x].size()); ++i) {
      fibre_index_[fibres_[x][i]] = i;
    }
  }
}

MorphismId FiniteGroupoid::compose_entry(MorphismId a, MorphismId b) const {
  if (const auto* t = std::get_if<DenseTable>(&composer_)) {
    return t->entry[static_cast<std::size_t>(a) * t->stride + b];
  }
  if (!composable(a, b)) return -1;
  if (const auto* r = std::get_if<ActionRule>(&composer_)) {
    const int g = a / r->space_size;
    const int h = b / r->space_size;
    const int x = a % r->space_size;
    return r->group_mul[g][h] * r->space_size + x;
  }
  const auto& p = std::get<PairRule>(composer_);
  return p.pair_to_id[target_[a]][source_[b]];
}

MorphismId FiniteGroupoid::compose(MorphismId a, MorphismId b) const {
  if (!composable(a, b)) {
    throw NonComposableError(a, b, source_[a], target_[b]);
  }
  const MorphismId r = compose_entry(a, b);
  if (r < 0) {
    throw GroupoidError("composition table has no entry for composable pair " +
                        pair_str(a, b));
  }
  return r;
}

int validate_group_table(const std::vector<std::vector<int>>& table) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw InvalidSpecError("group table is empty");
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(table[a].size()) != n) {
      throw InvalidSpecError("group table row " + std::to_string(a) +
                             " is not of length " + std::to_string(n));
    }
    for (int b = 0; b < n; ++b) {
      if (table[a][b] < 0 || table[a][b] >= n) {
        throw InvalidSpecError("group table entry " + pair_str(a, b) +
                               " out of range");
      }
    }
  }
  int identity = -1;
  for (int e = 0; e < n && identity < 0; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) ok = table[e][a] == a && table[a][e] == a;
    if (ok) identity = e;
  }
  if (identity < 0) throw InvalidSpecError("group table has no identity element");
  for (int a = 0; a < n; ++a) {
    bool has_inverse = false;
    for (int b = 0; b < n && !has_inverse; ++b) {
      has_inverse = table[a][b] == identity && table[b][a] == identity;
    }
    if (!has_inverse) {
      throw InvalidSpecError("group table element " + std::to_string(a) +
                             " has no inverse");
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        if (table[table[a][b]][c] != table[a][table[b][c]]) {
          throw InvalidSpecError("group table is not associative at (" +
                                 std::to_string(a) + ", " + std::to_string(b) +
                                 ", " + std::to_string(c) + ")");
        }
      }
    }
  }
  return identity;
}

FiniteGroupoid build_action_groupoid(const ActionSpec& spec) {
  const int ng = spec.group_size();
  const int identity = validate_group_table(spec.group);
  if (static_cast<int>(spec.action.size()) != ng) {
    throw InvalidSpecError("action map must have one row per group element");
  }
  const int nx = spec.space_size();
  if (nx == 0) throw InvalidSpecError("action space is empty");
  for (int g = 0; g < ng; ++g) {
    if (static_cast<int>(spec.action[g].size()) != nx) {
      throw InvalidSpecError("action row " + std::to_string(g) +
                             " is not of length " + std::to_string(nx));
    }
    for (int x = 0; x < nx; ++x) {
      if (spec.action[g][x] < 0 || spec.action[g][x] >= nx) {
        throw InvalidSpecError("action entry " + pair_str(g, x) + " out of range");
      }
    }
  }
  for (int x = 0; x < nx; ++x) {
    if (spec.action[identity][x] != x) {
      throw InvalidSpecError("not a left action: identity moves point " +
                             std::to_string(x));
    }
  }
  for (int g = 0; g < ng; ++g) {
    for (int h = 0; h < ng; ++h) {
      for (int x = 0; x < nx; ++x) {
        if (spec.action[spec.group[g][h]][x] != spec.action[g][spec.action[h][x]]) {
          throw InvalidSpecError("not a left action: pair " + pair_str(g, h) +
                                 " disagrees at point " + std::to_string(x));
        }
      }
    }
  }

  std::vector<int> inv(ng);
  for (int g = 0; g < ng; ++g) {
    for (int h = 0; h < ng; ++h) {
      if (spec.group[g][h] == identity) {
        inv[g] = h;
        break;
      }
    }
  }

  const int nm = ng * nx;
  std::vector<ObjectId> source(nm), target(nm);
  std::vector<MorphismId> unit(nx), inverse(nm);
  for (int g = 0; g < ng; ++g) {
    for (int x = 0; x < nx; ++x) {
      const MorphismId m = g * nx + x;
      target[m] = x;
      source[m] = spec.action[inv[g]][x];
      inverse[m] = inv[g] * nx + source[m];
    }
  }
  for (int x = 0; x < nx; ++x) unit[x] = identity * nx + x;

  FiniteGroupoid::ActionRule rule;
  rule.space_size = nx;
  rule.group_mul = spec.group;
  return FiniteGroupoid(nx, std::move(source), std::move(target), std::move(unit),
                        std::move(inverse), std::move(rule));
}

FiniteGroupoid build_pair_groupoid(const PartitionSpec& spec) {
  std::size_t covered = 0;
  int max_obj = -1;
  std::set<ObjectId> seen;
  for (const auto& block : spec.blocks) {
    if (block.empty()) throw InvalidSpecError("partition block is empty");
    for (ObjectId x : block) {
      if (x < 0) throw InvalidSpecError("negative object id in partition");
      if (!seen.insert(x).second) {
        throw InvalidSpecError("object " + std::to_string(x) +
                               " appears in two blocks");
      }
      max_obj = std::max(max_obj, x);
      ++covered;
    }
  }
  const int nx = max_obj + 1;
  if (covered != static_cast<std::size_t>(nx)) {
    throw InvalidSpecError("partition does not cover objects 0.." +
                           std::to_string(nx - 1));
  }

  FiniteGroupoid::PairRule rule;
  rule.pair_to_id.assign(nx, std::vector<MorphismId>(nx, -1));
  std::vector<ObjectId> source, target;
  for (const auto& block : spec.blocks) {
    auto sorted = block;
    std::sort(sorted.begin(), sorted.end());
    for (ObjectId y : sorted) {
      for (ObjectId x : sorted) {
        rule.pair_to_id[y][x] = static_cast<MorphismId>(source.size());
        target.push_back(y);
        source.push_back(x);
      }
    }
  }
  const int nm = static_cast<int>(source.size());
  std::vector<MorphismId> unit(nx), inverse(nm);
  for (ObjectId x = 0; x < nx; ++x) unit[x] = rule.pair_to_id[x][x];
  for (MorphismId m = 0; m < nm; ++m) {
    inverse[m] = rule.pair_to_id[source[m]][target[m]];
  }
  return FiniteGroupoid(nx, std::move(source), std::move(target), std::move(unit),
                        std::move(inverse), std::move(rule));
}

FiniteGroupoid build_group_groupoid(const std::vector<std::vector<int>>& table) {
  const int identity = validate_group_table(table);
  const int n = static_cast<int>(table.size());
  std::vector<ObjectId> source(n, 0), target(n, 0);
  std::vector<MorphismId> unit{identity};
  std::vector<MorphismId> inverse(n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (table[a][b] == identity) {
        inverse[a] = b;
        break;
      }
    }
  }
  FiniteGroupoid::DenseTable dense;
  dense.stride = n;
  dense.entry.reserve(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) dense.entry.push_back(table[a][b]);
  }
  return FiniteGroupoid(1, std::move(source), std::move(target), std::move(unit),
                        std::move(inverse), std::move(dense));
}

AxiomReport verify_axioms(const FiniteGroupoid& g) {
  AxiomReport report;
  auto violate = [&report](const std::string& axiom, const std::string& detail) {
    report.violations.push_back({axiom, detail});
  };

  const int nm = g.morphism_count();
  const int nx = g.object_count();

  bool structure_ok = true;
  for (MorphismId m = 0; m < nm; ++m) {
    if (g.source(m) < 0 || g.source(m) >= nx || g.target(m) < 0 ||
        g.target(m) >= nx) {
      violate("structure", "morphism " + std::to_string(m) +
                               " has out-of-range source or target");
      structure_ok = false;
    }
    if (g.inverse(m) < 0 || g.inverse(m) >= nm) {
      violate("structure",
              "morphism " + std::to_string(m) + " has out-of-range inverse");
      structure_ok = false;
    }
  }
  for (ObjectId x = 0; x < nx; ++x) {
    if (g.unit(x) < 0 || g.unit(x) >= nm) {
      violate("structure", "object " + std::to_string(x) + " has no unit morphism");
      structure_ok = false;
    }
  }
  if (!structure_ok) return report;

  for (ObjectId x = 0; x < nx; ++x) {
    const MorphismId e = g.unit(x);
    if (g.source(e) != x || g.target(e) != x) {
      violate("unit", "unit of object " + std::to_string(x) +
                          " does not have source = target = " + std::to_string(x));
    }
  }

  // Composition defined exactly on composable pairs, with the right endpoints.
  for (MorphismId a = 0; a < nm; ++a) {
    for (MorphismId b = 0; b < nm; ++b) {
      const MorphismId ab = g.compose_entry(a, b);
      if (g.composable(a, b)) {
        if (ab < 0) {
          violate("composition", "composable pair " + pair_str(a, b) +
                                     " has no composition");
        } else if (ab >= nm) {
          violate("composition",
                  "pair " + pair_str(a, b) + " composes out of range");
        } else if (g.source(ab) != g.source(b) || g.target(ab) != g.target(a)) {
          violate("composition", "pair " + pair_str(a, b) +
                                     " composes to morphism " + std::to_string(ab) +
                                     " with wrong source or target");
        }
      } else if (ab >= 0) {
        violate("composition", "non-composable pair " + pair_str(a, b) +
                                   " has a composition entry");
      }
    }
  }

  auto safe_compose = [&g, nm](MorphismId a, MorphismId b) -> MorphismId {
    if (!g.composable(a, b)) return -1;
    const MorphismId r = g.compose_entry(a, b);
    return (r >= 0 && r < nm) ? r : -1;
  };

  for (MorphismId m = 0; m < nm; ++m) {
    const MorphismId es = g.unit(g.source(m));
    const MorphismId et = g.unit(g.target(m));
    if (safe_compose(m, es) != m) {
      violate("unit", "m * e_source != m for morphism " + std::to_string(m));
    }
    if (safe_compose(et, m) != m) {
      violate("unit", "e_target * m != m for morphism " + std::to_string(m));
    }
    const MorphismId mi = g.inverse(m);
    if (g.source(mi) != g.target(m) || g.target(mi) != g.source(m)) {
      violate("inverse", "inverse of " + std::to_string(m) +
                             " has wrong source or target");
    } else {
      if (safe_compose(m, mi) != et) {
        violate("inverse", "m * m^-1 != e_target for morphism " + std::to_string(m));
      }
      if (safe_compose(mi, m) != es) {
        violate("inverse", "m^-1 * m != e_source for morphism " + std::to_string(m));
      }
    }
  }

  // Associativity over all composable triples.
  for (MorphismId b = 0; b < nm; ++b) {
    for (MorphismId c = 0; c < nm; ++c) {
      const MorphismId bc = safe_compose(b, c);
      if (bc < 0) continue;
      for (MorphismId a = 0; a < nm; ++a) {
        if (!g.composable(a, b)) continue;
        const MorphismId ab = safe_compose(a, b);
        if (ab < 0) continue;
        if (safe_compose(ab, c) != safe_compose(a, bc)) {
          violate("associativity", "(a b) c != a (b c) for (" + std::to_string(a) +
                                       ", " + std::to_string(b) + ", " +
                                       std::to_string(c) + ")");
        }
      }
    }
  }

  // Fibres partition the morphism set and contain their unit.
  std::size_t fibre_total = 0;
  for (ObjectId x = 0; x < nx; ++x) {
    const auto& f = g.fibre(x);
    fibre_total += f.size();
    bool has_unit = false;
    for (MorphismId m : f) {
      if (g.target(m) != x) {
        violate("fibre", "morphism " + std::to_string(m) + " listed in fibre of " +
                             std::to_string(x) + " but has another target");
      }
      if (m == g.unit(x)) has_unit = true;
    }
    if (!has_unit) {
      violate("fibre", "fibre of object " + std::to_string(x) +
                           " does not contain its unit");
    }
  }
  if (fibre_total != static_cast<std::size_t>(nm)) {
    violate("fibre", "fibres do not partition the morphism set");
  }

  // Left multiplication by any morphism is a bijection between fibres.
  for (MorphismId m = 0; m < nm; ++m) {
    const auto& from = g.fibre(g.source(m));
    const auto& to = g.fibre(g.target(m));
    std::set<MorphismId> image;
    bool images_ok = true;
    for (MorphismId b : from) {
      const MorphismId mb = safe_compose(m, b);
      if (mb < 0 || g.target(mb) != g.target(m)) {
        images_ok = false;
        break;
      }
      image.insert(mb);
    }
    if (!images_ok || image.size() != to.size()) {
      violate("translation", "left multiplication by " + std::to_string(m) +
                                 " is not a bijection between fibres");
    }
  }

  return report;
}

}  // namespace gw
