#include "eprsim/ghz.hpp"

#include <stdexcept>

namespace eprsim::ghz {

std::string_view var_name(SignVar v) {
  switch (v) {
    case SignVar::kS1a:
      return "S1_a";
    case SignVar::kS1Ra:
      return "S1_Ra";
    case SignVar::kS2a:
      return "S2_a";
    case SignVar::kS2Ra:
      return "S2_Ra";
  }
  return "?";
}

bool satisfies(const Constraint& c, const Assignment& a) {
  const int l = a[static_cast<std::size_t>(c.left)];
  const int r = a[static_cast<std::size_t>(c.right)];
  return c.relation == Relation::kEqual ? l == r : l == -r;
}

ConstraintSystem::ConstraintSystem(std::vector<Constraint> constraints)
    : constraints_(std::move(constraints)) {
  if (constraints_.empty()) {
    throw std::invalid_argument("constraint system must not be empty");
  }
  for (const Constraint& c : constraints_) {
    if (c.left == c.right) {
      throw std::invalid_argument("constraint " + c.label +
                                  " relates a variable to itself");
    }
  }
}

ConstraintSystem ConstraintSystem::without(std::string_view label) const {
  std::vector<Constraint> kept;
  for (const Constraint& c : constraints_) {
    if (c.label != label) kept.push_back(c);
  }
  return ConstraintSystem(std::move(kept));
}

ConstraintSystem ConstraintSystem::with(Constraint extra) const {
  std::vector<Constraint> all = constraints_;
  all.push_back(std::move(extra));
  return ConstraintSystem(std::move(all));
}

ConstraintSystem cross_particle_system() {
  return ConstraintSystem({
      {SignVar::kS1a, SignVar::kS1Ra, Relation::kNegation, "(1)"},
      {SignVar::kS2a, SignVar::kS2Ra, Relation::kNegation, "(2)"},
      {SignVar::kS1a, SignVar::kS2a, Relation::kEqual, "(3)"},
      {SignVar::kS1a, SignVar::kS2Ra, Relation::kNegation, "(4)"},
  });
}

Constraint attribution_a() {
  return {SignVar::kS1a, SignVar::kS2a, Relation::kNegation, "(5)+(6)"};
}

Constraint attribution_ra() {
  return {SignVar::kS1Ra, SignVar::kS2Ra, Relation::kNegation, "(7)+(8)"};
}

ConstraintSystem full_attribution_system() {
  return cross_particle_system().with(attribution_a()).with(attribution_ra());
}

Assignment assignment_at(std::size_t index) {
  Assignment a{};
  for (std::size_t v = 0; v < kVarCount; ++v) {
    const std::size_t bit = (index >> (kVarCount - 1 - v)) & 1u;
    a[v] = bit ? -1 : 1;
  }
  return a;
}

SolveResult solve(const ConstraintSystem& system) {
  std::vector<RefutationRow> rows;
  rows.reserve(kAssignmentCount);
  for (std::size_t i = 0; i < kAssignmentCount; ++i) {
    const Assignment a = assignment_at(i);
    const Constraint* violated = nullptr;
    for (const Constraint& c : system.constraints()) {
      if (!satisfies(c, a)) {
        violated = &c;
        break;
      }
    }
    if (violated == nullptr) {
      return Satisfiable{a};
    }
    rows.push_back({a, violated->label});
  }
  return Unsatisfiable{std::move(rows)};
}

std::string format_assignment(const Assignment& a) {
  std::string out;
  for (std::size_t v = 0; v < kVarCount; ++v) {
    if (v) out += ' ';
    out += var_name(static_cast<SignVar>(v));
    out += a[v] > 0 ? "=+1" : "=-1";
  }
  return out;
}

}  // namespace eprsim::ghz
