// ebg.hpp
//
// Horn-clause domain theories, scenario facts, and explanation trees built by
// backward chaining.
//
// Theory files:
//   R2: complete(x) <= officeselect(x, "Congress") & member(x) & aspect(x).
//   R9: base(x).
//   domain stateselect: "North Carolina", "Virginia".
//   alias "North Carolina" = NC.
// Bare identifiers in rules are variables, quoted strings and numbers are
// constants. In facts and goals bare identifiers are constants. `?name` is a
// variable everywhere.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pipekit/error.hpp"

namespace pipekit {

using json = nlohmann::json;

struct Term {
  enum class Kind { Var, Const };
  Kind kind = Kind::Const;
  std::string name;

  static Term var(std::string name) { return Term{Kind::Var, std::move(name)}; }
  static Term constant(std::string value) { return Term{Kind::Const, std::move(value)}; }
  bool is_var() const { return kind == Kind::Var; }
  std::string to_string() const;

  auto operator<=>(const Term&) const = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  bool ground() const;
  std::string to_string() const;

  auto operator<=>(const Atom&) const = default;
};

struct Rule {
  std::string id;
  Atom head;
  std::vector<Atom> body;

  std::string to_string() const;
};

struct Fact {
  std::string id;
  Atom atom;
};

/// Orders ids by alphabetic prefix, then numeric suffix: R2 < R10 < S1.
bool natural_less(std::string_view a, std::string_view b);

class Theory {
 public:
  Theory() = default;
  /// Throws DuplicateId or ArityMismatch.
  Theory(std::vector<Rule> rules, std::map<std::string, std::vector<std::string>> domains = {},
         std::map<std::string, std::string> aliases = {});

  const std::vector<Rule>& rules() const { return rules_; }
  const Rule* rule(std::string_view id) const;
  /// Rules whose head has this predicate, in natural id order.
  std::vector<const Rule*> rules_for(std::string_view predicate) const;
  std::optional<std::size_t> arity(std::string_view predicate) const;

  const std::map<std::string, std::vector<std::string>>& domains() const { return domains_; }
  const std::vector<std::string>* domain(std::string_view predicate) const;
  const std::map<std::string, std::string>& aliases() const { return aliases_; }
  /// Test-value spelling of a constant: its alias, else CamelCase.
  std::string spell(const std::string& value) const;

 private:
  std::vector<Rule> rules_;  // natural id order
  std::map<std::string, std::vector<std::string>> domains_;
  std::map<std::string, std::string> aliases_;
  std::map<std::string, std::size_t, std::less<>> arity_;
};

class FactSet {
 public:
  FactSet() = default;
  /// Throws DuplicateId, ArityMismatch, or SyntaxError for non-ground atoms.
  explicit FactSet(std::vector<Fact> facts);

  const std::vector<Fact>& facts() const { return facts_; }
  const Fact* find(std::string_view id) const;

 private:
  std::vector<Fact> facts_;  // natural id order
};

Theory parse_theory(std::string_view text);
FactSet parse_facts(std::string_view text);
/// Goal syntax: bare identifiers are constants.
Atom parse_goal(std::string_view text);
/// Atom syntax as rendered by Atom::to_string: bare identifiers are variables.
Atom parse_atom(std::string_view text);

using Substitution = std::map<std::string, Term>;

Term walk(const Term& t, const Substitution& s);
Atom substitute(const Atom& a, const Substitution& s);
/// Most general unifier extending `s`. Terms are function-free, so the occurs
/// check reduces to refusing x -> x.
std::optional<Substitution> unify(const Atom& a, const Atom& b, Substitution s = {});

struct ExplanationTree {
  enum class Kind { Fact, Rule };
  Atom atom;
  Kind kind = Kind::Fact;
  std::string id;           // fact or rule id
  Substitution bindings;    // rule variable -> term; empty for fact leaves
  std::vector<ExplanationTree> children;

  bool is_fact() const { return kind == Kind::Fact; }
  friend bool operator==(const ExplanationTree&, const ExplanationTree&) = default;
};

json to_json(const ExplanationTree& t);
ExplanationTree tree_from_json(const json& j);

struct ProofLimits {
  std::size_t max_depth = 64;
  std::size_t max_solutions = 256;
};

struct ProofSet {
  std::vector<ExplanationTree> trees;
  bool depth_exceeded = false;  // some branch was cut by the depth limit
  bool capped = false;          // stopped at max_solutions
};

/// First proof, depth-first with facts before rules, each in natural id
/// order. Absent when unprovable; throws DepthExceeded when nothing was found
/// and the depth limit cut the search.
std::optional<ExplanationTree> explain(const Theory& th, const FactSet& facts, const Atom& goal,
                                       ProofLimits limits = {});

/// All proofs in search order, up to limits.max_solutions.
ProofSet explain_all(const Theory& th, const FactSet& facts, const Atom& goal,
                     ProofLimits limits = {});

struct Verification {
  bool ok = true;
  std::string path;  // child indices from the root, e.g. "0/1/2"
  std::string message;
  explicit operator bool() const { return ok; }
};

Verification verify_explanation(const Theory& th, const FactSet& facts, const ExplanationTree& t);

std::set<std::string> unused_facts(const ExplanationTree& t, const FactSet& facts);

/// Copy of `r` with every variable v renamed to v#n, and the renaming.
std::pair<Rule, Substitution> rename_apart(const Rule& r, std::size_t n);
/// Applies `s` to every atom and binding in the tree.
void resolve_tree(ExplanationTree& t, const Substitution& s);
/// Renames search variables (v#n) back to base names, numbering clashes.
void canonicalize_variables(ExplanationTree& t);

/// Grounds a generalized tree by unifying each fact leaf with its fact.
/// Absent when some leaf does not unify.
std::optional<ExplanationTree> instantiate(const ExplanationTree& t, const FactSet& facts);

}  // namespace pipekit
