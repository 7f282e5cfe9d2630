#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace gw {

// Objects and morphisms are identified by dense indices 0..count-1.
using ObjectId = int;
using MorphismId = int;

class GroupoidError : public std::runtime_error {
 public:
  explicit GroupoidError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when two morphisms with mismatched source/target are composed.
class NonComposableError : public GroupoidError {
 public:
  NonComposableError(MorphismId left, MorphismId right, ObjectId left_source,
                     ObjectId right_target);
  MorphismId left;
  MorphismId right;
  ObjectId left_source;
  ObjectId right_target;
};

// Raised by builders on malformed input (non-group table, non-action map,
// broken partition). `detail` names the violating entry.
class InvalidSpecError : public GroupoidError {
 public:
  explicit InvalidSpecError(const std::string& what) : GroupoidError(what) {}
};

// A finite group acting on a finite set from the left.
// group[g][h] is the product gh, action[g][x] the point g.x.
struct ActionSpec {
  std::vector<std::vector<int>> group;
  std::vector<std::vector<int>> action;

  int group_size() const { return static_cast<int>(group.size()); }
  int space_size() const {
    return group.empty() ? 0 : static_cast<int>(action.empty() ? 0 : action[0].size());
  }
};

// A partition of the object set into equivalence classes.
struct PartitionSpec {
  std::vector<std::vector<ObjectId>> blocks;
};

struct AxiomViolation {
  std::string axiom;
  std::string detail;
};

struct AxiomReport {
  std::vector<AxiomViolation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

// A finite groupoid: morphisms carry source/target objects, every morphism
// is invertible, and composition ab is defined exactly when the source of a
// equals the target of b. Fibres are the preimages of the target map; each
// fibre list starts with the unit of its object, followed by the remaining
// morphisms in id order. Instances are immutable after construction.
class FiniteGroupoid {
 public:
  // Composition backends. Action and pair groupoids compose by arithmetic
  // on decoded ids instead of materializing a |morphisms|^2 table.
  struct DenseTable {
    int stride = 0;
    std::vector<MorphismId> entry;  // entry[a*stride+b], -1 when undefined
  };
  struct ActionRule {
    int space_size = 0;
    std::vector<std::vector<int>> group_mul;  // morphism id = g*space_size + x
  };
  struct PairRule {
    std::vector<std::vector<MorphismId>> pair_to_id;  // [target][source], -1
  };
  using Composer = std::variant<DenseTable, ActionRule, PairRule>;

  FiniteGroupoid(int object_count, std::vector<ObjectId> source,
                 std::vector<ObjectId> target, std::vector<MorphismId> unit,
                 std::vector<MorphismId> inverse, Composer composer);

  // Wraps raw tables without validating them; pair with verify_axioms.
  static FiniteGroupoid from_tables(std::vector<ObjectId> source,
                                    std::vector<ObjectId> target,
                                    std::vector<MorphismId> unit,
                                    std::vector<MorphismId> inverse,
                                    std::vector<std::vector<MorphismId>> compose);

  int object_count() const { return object_count_; }
  int morphism_count() const { return static_cast<int>(source_.size()); }

  ObjectId source(MorphismId m) const { return source_[m]; }
  ObjectId target(MorphismId m) const { return target_[m]; }
  MorphismId unit(ObjectId x) const { return unit_[x]; }
  MorphismId inverse(MorphismId m) const { return inverse_[m]; }
  bool is_unit(MorphismId m) const { return unit_[target_[m]] == m; }

  bool composable(MorphismId a, MorphismId b) const {
    return source_[a] == target_[b];
  }

  // Composition ab; throws NonComposableError unless source(a) == target(b).
  MorphismId compose(MorphismId a, MorphismId b) const;

  // Raw table access for axiom checking: the stored entry for (a, b), or -1
  // when no entry exists. Never throws.
  MorphismId compose_entry(MorphismId a, MorphismId b) const;

  // Target fibre of x: unit first, then the rest in id order.
  const std::vector<MorphismId>& fibre(ObjectId x) const { return fibres_[x]; }

  // Position of m within fibre(target(m)).
  int fibre_index(MorphismId m) const { return fibre_index_[m]; }

 private:
  int object_count_ = 0;
  std::vector<ObjectId> source_;
  std::vector<ObjectId> target_;
  std::vector<MorphismId> unit_;
  std::vector<MorphismId> inverse_;
  Composer composer_;
  std::vector<std::vector<MorphismId>> fibres_;
  std::vector<int> fibre_index_;

  void build_fibres();
};

// Action groupoid of a left group action: morphisms are pairs (g, x) with
// target x, source g^{-1}x and composition (g, x)(g', g^{-1}x) = (gg', x).
// Morphism ids are g * space_size + x. Rejects specs where `group` is not a
// group table or `action` is not a left action.
FiniteGroupoid build_action_groupoid(const ActionSpec& spec);

// Principal groupoid of an equivalence relation: morphisms are ordered pairs
// (y, x) of equivalent objects with source x and target y.
FiniteGroupoid build_pair_groupoid(const PartitionSpec& spec);

// One-object groupoid of a finite group given by its multiplication table.
FiniteGroupoid build_group_groupoid(const std::vector<std::vector<int>>& table);

// Exhaustive check of the groupoid axioms: units, inverses, source/target of
// compositions, associativity, fibre partition, and bijectivity of left
// multiplication on fibres. Violations are collected, not thrown.
AxiomReport verify_axioms(const FiniteGroupoid& g);

// Validates a multiplication table (closure, identity, inverses,
// associativity) and returns the identity element. Throws InvalidSpecError.
int validate_group_table(const std::vector<std::vector<int>>& table);

}  // namespace gw
