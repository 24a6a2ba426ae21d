// factorization.hpp
//
// Classifies information-seeking activities against a program: personable
// (served by partial evaluation), under-factored (needs a presentation order
// the program cannot produce), or over-factored (only complete evaluation
// serves it). Coverage reports aggregate verdicts over activity sets.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pipekit/ispace.hpp"

namespace pipekit {

/// An activity as data. `given` holds raw `key -> value | "!value"` pairs and
/// is resolved against each program it is classified on.
struct Activity {
  std::string id;
  std::vector<std::pair<std::string, std::string>> given;
  std::vector<std::string> required_root_order;
  bool expects_interaction = true;
  std::string note;
};

Activity activity_from_json(const json& j);
json to_json(const Activity& a);
std::vector<Activity> activities_from_json(const json& j);

enum class Verdict { Personable, UnderFactored, OverFactored };

std::string_view to_string(Verdict v);

struct FactorizationVerdict {
  std::string activity_id;
  Verdict verdict = Verdict::Personable;
  std::optional<Program> residual;
  std::string violated_key;  // set for UnderFactored
  std::string reason;        // set when classification failed
};

json to_json(const FactorizationVerdict& v);

FactorizationVerdict classify(const Program& p, const Activity& act);

struct CoverageReport {
  std::size_t total = 0;
  std::size_t personable = 0;
  std::size_t complete_only = 0;
  std::size_t unsupported = 0;
  std::vector<FactorizationVerdict> verdicts;

  double personable_ratio() const;
  double complete_only_ratio() const;
};

json to_json(const CoverageReport& r);

/// Errors raised while classifying one activity land in `unsupported` with
/// the error text as reason.
CoverageReport evaluate_coverage(const Program& p, const std::vector<Activity>& acts);

}  // namespace pipekit
