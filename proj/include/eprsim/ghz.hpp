#pragma once

#include <array>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace eprsim::ghz {

/// S1_a, S1_Ra: particle 1 under B(a), B(Ra); S2_a, S2_Ra likewise for
/// particle 2.
enum class SignVar { kS1a = 0, kS1Ra = 1, kS2a = 2, kS2Ra = 3 };

inline constexpr std::size_t kVarCount = 4;
inline constexpr std::size_t kAssignmentCount = 1u << kVarCount;

std::string_view var_name(SignVar v);

enum class Relation { kEqual, kNegation };

struct Constraint {
  SignVar left;
  SignVar right;
  Relation relation;
  std::string label;
};

/// +1/-1 per variable, indexed by SignVar.
using Assignment = std::array<int, kVarCount>;

bool satisfies(const Constraint& c, const Assignment& a);

class ConstraintSystem {
 public:
  /// Throws std::invalid_argument for an empty list or a constraint relating
  /// a variable to itself.
  explicit ConstraintSystem(std::vector<Constraint> constraints);

  const std::vector<Constraint>& constraints() const { return constraints_; }

  /// Copy without the constraints carrying `label`.
  ConstraintSystem without(std::string_view label) const;
  ConstraintSystem with(Constraint extra) const;

 private:
  std::vector<Constraint> constraints_;
};

/// Relations (1)-(4): each particle's two answers are opposite, and the cross
/// relations between particles.
ConstraintSystem cross_particle_system();

/// The cross system plus the two same-particle attributions that the value
/// diagrams (5)-(8) force.
ConstraintSystem full_attribution_system();

Constraint attribution_a();   // S1_a = -S2_a, "(5)+(6)"
Constraint attribution_ra();  // S1_Ra = -S2_Ra, "(7)+(8)"

/// The i-th assignment in lexicographic order with +1 before -1, S1_a most
/// significant.
Assignment assignment_at(std::size_t index);

struct Satisfiable {
  Assignment witness;
};

struct RefutationRow {
  Assignment assignment;
  std::string violated_label;
};

struct Unsatisfiable {
  std::vector<RefutationRow> certificate;  // one row per assignment
};

using SolveResult = std::variant<Satisfiable, Unsatisfiable>;

/// Exhaustive check over all 16 assignments.
SolveResult solve(const ConstraintSystem& system);

std::string format_assignment(const Assignment& a);

}  // namespace eprsim::ghz
