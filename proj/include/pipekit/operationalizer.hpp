// operationalizer.hpp
//
// Turns explanation trees into PIPE programs: identity elimination and
// regression generalize a proof, a frontier splits it into a fixed region and
// open subgoals, and the open subgoals are compiled into nested chains that
// enumerate every way a user can complete the proof.

#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pipekit/ebg.hpp"
#include "pipekit/factorization.hpp"
#include "pipekit/ispace.hpp"

namespace pipekit {

/// Replaces the scenario constant (first argument of the root) by `x` and
/// rebuilds the proof from fresh rule copies, unifying rule heads with the
/// body literals above them only. Constants that came from facts become
/// variables; constants written in rules stay. Throws MalformedTree when the
/// tree does not follow the theory.
ExplanationTree generalize(const ExplanationTree& tree, const Theory& theory);

struct FrontierSpec {
  enum class Mode { AtRoot, AtLeaves, Predicates, Depth };
  Mode mode = Mode::AtRoot;
  std::set<std::string> predicates;
  std::size_t depth = 0;

  static FrontierSpec at_root() { return {Mode::AtRoot, {}, 0}; }
  static FrontierSpec at_leaves() { return {Mode::AtLeaves, {}, 0}; }
  static FrontierSpec at_predicates(std::set<std::string> preds);
  static FrontierSpec at_depth(std::size_t k) { return {Mode::Depth, {}, k}; }

  /// `root`, `leaves`, `preds:member,aspect`, `depth:2`.
  static FrontierSpec parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const FrontierSpec&, const FrontierSpec&) = default;
};

/// The part of a generalized tree kept by the system. Open nodes mark where
/// the user takes over.
struct CutNode {
  enum class Kind { Rule, Fact, Open };
  Kind kind = Kind::Open;
  Atom atom;
  std::string id;  // rule or fact id; empty for open nodes
  std::vector<CutNode> children;

  friend bool operator==(const CutNode&, const CutNode&) = default;
};

struct OperationalizedExplanation {
  std::string id;
  Atom generalized_goal;
  CutNode fixed;
  std::vector<Atom> open_subgoals;  // left to right

  /// True when the root itself is open: nothing is fixed.
  bool fixes_nothing() const { return fixed.kind == CutNode::Kind::Open; }
};

json to_json(const CutNode& n);
CutNode cut_node_from_json(const json& j);
json to_json(const OperationalizedExplanation& op);
OperationalizedExplanation operationalized_from_json(const json& j);

/// Throws MalformedTree when the root still carries a scenario constant and
/// FrontierMiss when a Predicates spec matches no node.
OperationalizedExplanation cut(const ExplanationTree& generalized, const FrontierSpec& spec,
                               std::string id = "explanation");

/// Page attached to one completed path. Tuple keys are test keys; a group
/// name with a member as value selects that flag (`Member: Senator`).
struct ContentBinding {
  std::map<std::string, std::string> tuple;
  std::string page;
  std::string payload;
};

json to_json(const ContentBinding& b);
std::vector<ContentBinding> bindings_from_json(const json& j);

struct GenerateOptions {
  bool strict = false;            // UnboundSubgoal instead of placeholders
  std::size_t max_depth = 64;     // rule expansion depth
  bool allow_unreachable = false; // skip bindings that match no path
  std::size_t max_paths = 100000; // BudgetExceeded beyond this many partial paths
};

inline constexpr std::string_view kExplanationKey = "explanation";
inline constexpr std::string_view kIncomplete = "incomplete";

/// Compiles operationalized explanations into one program. Several
/// explanations are joined under a chain on `explanation=<id>`.
Program generate_model(const Theory& theory, const std::vector<OperationalizedExplanation>& ops,
                       const std::vector<ContentBinding>& bindings, GenerateOptions opts = {});

struct Scenario {
  std::string id;
  ExplanationTree tree;  // as returned by explain
};

struct OperationalityRow {
  FrontierSpec spec;
  double personable_ratio = 0;
  double complete_only_ratio = 0;
  std::size_t model_size = 0;
  CoverageReport report;
};

json to_json(const OperationalityRow& r);

/// Generates one model per spec over all scenarios and scores it against the
/// probes. Best personable ratio first, smaller model on ties.
std::vector<OperationalityRow> assess_operationality(const Theory& theory,
                                                     const std::vector<Scenario>& scenarios,
                                                     const std::vector<FrontierSpec>& specs,
                                                     const std::vector<Activity>& probes,
                                                     const std::vector<ContentBinding>& bindings = {});

}  // namespace pipekit
