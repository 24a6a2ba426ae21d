#include "pipekit/factorization.hpp"

#include <algorithm>
#include <set>

#include "pipekit/specializer.hpp"

namespace pipekit {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Personable: return "Personable";
    case Verdict::UnderFactored: return "UnderFactored";
    case Verdict::OverFactored: return "OverFactored";
  }
  return "?";
}

Activity activity_from_json(const json& j) {
  if (!j.is_object() || !j.contains("id") || !j.at("id").is_string()) {
    throw Error(ErrorKind::InvalidJson, "activity needs a string 'id'");
  }
  Activity a;
  a.id = j.at("id").get<std::string>();
  if (j.contains("given")) {
    const auto& g = j.at("given");
    if (!g.is_object()) throw Error(ErrorKind::InvalidJson, a.id + ": 'given' must be an object");
    for (const auto& [k, v] : g.items()) {
      if (v.is_string()) {
        a.given.emplace_back(k, v.get<std::string>());
      } else if (v.is_boolean()) {
        a.given.emplace_back(k, v.get<bool>() ? "true" : "!true");
      } else {
        throw Error(ErrorKind::InvalidJson, a.id + ": given value for " + k + " must be a string");
      }
    }
  }
  if (j.contains("required_root_order")) {
    std::set<std::string> seen;
    for (const auto& k : j.at("required_root_order")) {
      auto key = k.get<std::string>();
      if (!seen.insert(key).second) {
        throw Error(ErrorKind::InvalidJson, a.id + ": required_root_order repeats " + key);
      }
      a.required_root_order.push_back(key);
    }
  }
  if (j.contains("expects_interaction")) a.expects_interaction = j.at("expects_interaction").get<bool>();
  if (j.contains("note")) a.note = j.at("note").get<std::string>();
  return a;
}

json to_json(const Activity& a) {
  json given = json::object();
  for (const auto& [k, v] : a.given) given[k] = v;
  json j{{"id", a.id}, {"given", given}, {"expects_interaction", a.expects_interaction}};
  if (!a.required_root_order.empty()) j["required_root_order"] = a.required_root_order;
  if (!a.note.empty()) j["note"] = a.note;
  return j;
}

std::vector<Activity> activities_from_json(const json& j) {
  const json* list = &j;
  if (j.is_object() && j.contains("activities")) list = &j.at("activities");
  if (!list->is_array()) throw Error(ErrorKind::InvalidJson, "expected an array of activities");
  std::vector<Activity> out;
  for (const auto& a : *list) out.push_back(activity_from_json(a));
  return out;
}

json to_json(const FactorizationVerdict& v) {
  json j{{"id", v.activity_id}, {"verdict", std::string(to_string(v.verdict))}};
  if (!v.violated_key.empty()) j["violated_key"] = v.violated_key;
  if (!v.reason.empty()) j["reason"] = v.reason;
  if (v.residual) j["residual"] = serialize(*v.residual);
  return j;
}

namespace {

// A chain heads dimension `key` when every arm's test is on that key or in
// the declared group of that name.
bool chain_matches(const Program& p, const Node& chain, const std::string& key) {
  return std::all_of(chain.arms().begin(), chain.arms().end(), [&](const Arm& arm) {
    return arm.test.key == key || p.dimension_of(arm.test) == key;
  });
}

// Returns the first order key that some chain at its demanded level fails to
// present.
std::optional<std::string> order_violation(const Program& p, const Node& n, std::size_t depth,
                                           const std::vector<std::string>& order) {
  if (depth >= order.size()) return std::nullopt;
  switch (n.kind()) {
    case Node::Kind::Content:
      return std::nullopt;
    case Node::Kind::Seq:
      for (const auto& c : n.children()) {
        if (auto v = order_violation(p, c, depth, order)) return v;
      }
      return std::nullopt;
    case Node::Kind::Chain:
      if (!chain_matches(p, n, order[depth])) return order[depth];
      for (const auto& arm : n.arms()) {
        if (auto v = order_violation(p, arm.body, depth + 1, order)) return v;
      }
      return std::nullopt;
  }
  return std::nullopt;
}

// An order key is already settled when the input chooses a test on it.
bool settled(const Program& p, const Assignment& given, const std::string& key) {
  for (const auto& t : given.chosen_tests()) {
    if (t.key == key || p.dimension_of(t) == key) return true;
  }
  return false;
}

}  // namespace

FactorizationVerdict classify(const Program& p, const Activity& act) {
  FactorizationVerdict out;
  out.activity_id = act.id;
  Assignment given = assignment_from_pairs(p, act.given);
  auto result = specialize(p, given);

  std::vector<std::string> order;
  for (const auto& k : act.required_root_order) {
    if (!settled(p, result.applied, k)) order.push_back(k);
  }
  if (auto bad = order_violation(p, result.residual.root(), 0, order)) {
    out.verdict = Verdict::UnderFactored;
    out.violated_key = *bad;
  } else if (is_complete(result.residual)) {
    out.verdict = Verdict::OverFactored;
  } else {
    out.verdict = Verdict::Personable;
  }
  out.residual = std::move(result.residual);
  return out;
}

double CoverageReport::personable_ratio() const {
  return total == 0 ? 0.0 : static_cast<double>(personable) / static_cast<double>(total);
}

double CoverageReport::complete_only_ratio() const {
  return total == 0 ? 0.0 : static_cast<double>(complete_only) / static_cast<double>(total);
}

json to_json(const CoverageReport& r) {
  json verdicts = json::array();
  for (const auto& v : r.verdicts) {
    json j = to_json(v);
    j.erase("residual");
    verdicts.push_back(j);
  }
  return json{{"total", r.total},
              {"personable", r.personable},
              {"complete_only", r.complete_only},
              {"unsupported", r.unsupported},
              {"personable_ratio", r.personable_ratio()},
              {"complete_only_ratio", r.complete_only_ratio()},
              {"verdicts", verdicts}};
}

CoverageReport evaluate_coverage(const Program& p, const std::vector<Activity>& acts) {
  CoverageReport r;
  for (const auto& act : acts) {
    ++r.total;
    FactorizationVerdict v;
    try {
      v = classify(p, act);
    } catch (const Error& e) {
      v.activity_id = act.id;
      v.verdict = Verdict::UnderFactored;
      v.reason = e.what();
    }
    switch (v.verdict) {
      case Verdict::Personable: ++r.personable; break;
      case Verdict::OverFactored: ++r.complete_only; break;
      case Verdict::UnderFactored: ++r.unsupported; break;
    }
    r.verdicts.push_back(std::move(v));
  }
  return r;
}

}  // namespace pipekit
