#include "pipekit/specializer.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace pipekit {

Assignment propagate_mutex(const Program& p, const Assignment& a) {
  Assignment out = a;
  for (const auto& t : a.chosen_tests()) {
    const auto* g = p.group_of(t);
    if (g == nullptr) continue;
    for (const auto& m : g->members) {
      if (m == t || m.key == t.key) continue;
      if (out.decide(m) == Truth::True) {
        throw Error(ErrorKind::InconsistentAssignment,
                    t.to_string() + " and " + m.to_string() + " are both chosen but share group " +
                        g->name);
      }
      out.deny(m);
    }
  }
  return out;
}

namespace {

struct Specializer {
  const Assignment& input;
  std::size_t dropped = 0;
  std::size_t hoisted = 0;

  std::optional<Node> run(const Node& n) {
    switch (n.kind()) {
      case Node::Kind::Content:
        return n;
      case Node::Kind::Seq: {
        std::vector<Node> kept;
        for (const auto& c : n.children()) {
          if (auto r = run(c)) kept.push_back(std::move(*r));
        }
        if (kept.empty()) return std::nullopt;
        return Node::seq(std::move(kept));
      }
      case Node::Kind::Chain: {
        const auto& arms = n.arms();
        for (std::size_t i = 0; i < arms.size(); ++i) {
          if (input.decide(arms[i].test) == Truth::True) {
            ++hoisted;
            dropped += arms.size() - 1;
            return run(arms[i].body);
          }
        }
        std::vector<Arm> kept;
        for (const auto& arm : arms) {
          if (input.decide(arm.test) == Truth::False) {
            ++dropped;
            continue;
          }
          auto body = run(arm.body);
          if (!body) {
            ++dropped;
            continue;
          }
          kept.push_back(Arm{arm.test, std::move(*body)});
        }
        if (kept.empty()) return std::nullopt;
        return Node::chain(std::move(kept));
      }
    }
    return std::nullopt;
  }
};

}  // namespace

SpecializationResult specialize(const Program& p, const Assignment& a) {
  Assignment applied = propagate_mutex(p, a);
  Specializer s{applied};
  auto root = s.run(p.root());
  if (!root) {
    throw Error(ErrorKind::EmptyResidual, "the input rules out every page of the program");
  }
  return SpecializationResult{Program(p.mutexes(), std::move(*root), p.meta()),
                              std::move(applied), s.dropped, s.hoisted};
}

namespace {

bool has_chain(const Node& n) {
  if (n.is_chain()) return true;
  return std::any_of(n.children().begin(), n.children().end(), has_chain);
}

}  // namespace

bool is_complete(const Program& p) { return !has_chain(p.root()); }

namespace {

struct KeyOptions {
  std::string key;
  // each option: chosen value, or a set of denied values
  std::vector<Decision> options;
};

std::vector<KeyOptions> candidate_keys(const Program& general, const Program& specific) {
  std::set<std::string> specific_keys;
  for (const auto& t : specific.tests()) specific_keys.insert(t.key);
  std::map<std::string, std::vector<std::string>> values;
  for (const auto& t : general.tests()) {
    if (specific_keys.count(t.key) != 0) continue;
    auto& vs = values[t.key];
    if (std::find(vs.begin(), vs.end(), t.value) == vs.end()) vs.push_back(t.value);
  }
  std::vector<KeyOptions> out;
  for (const auto& [key, vs] : values) {
    KeyOptions ko{key, {}};
    for (const auto& v : vs) ko.options.push_back(Decision{Decision::Kind::Chosen, v, {}});
    // Denial subsets, smallest first.
    std::size_t n = vs.size();
    std::vector<std::set<std::string>> subsets;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      std::set<std::string> s;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (std::size_t{1} << i)) s.insert(vs[i]);
      }
      subsets.push_back(std::move(s));
    }
    std::stable_sort(subsets.begin(), subsets.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
    for (auto& s : subsets) ko.options.push_back(Decision{Decision::Kind::Denied, {}, std::move(s)});
    out.push_back(std::move(ko));
  }
  return out;
}

}  // namespace

std::optional<Assignment> specializes_to(const Program& general, const Program& specific,
                                         SearchBudget budget) {
  const auto keys = candidate_keys(general, specific);
  std::size_t tried = 0;

  auto matches = [&](const Assignment& a) {
    if (++tried > budget.max_candidates) {
      throw Error(ErrorKind::BudgetExceeded,
                  "no witness among the first " + std::to_string(budget.max_candidates) +
                      " candidate assignments");
    }
    try {
      return specialize(general, a).residual == specific;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InconsistentAssignment || e.kind() == ErrorKind::EmptyResidual) {
        return false;
      }
      throw;
    }
  };

  // Breadth-first by number of decided keys; within a size, key subsets in
  // lexicographic order, then options in declaration order.
  for (std::size_t size = 0; size <= keys.size(); ++size) {
    std::vector<std::size_t> pick(size);
    std::optional<Assignment> found;
    std::function<bool(std::size_t, std::size_t, Assignment&)> options;
    std::function<bool(std::size_t, std::size_t)> subsets;

    options = [&](std::size_t slot, std::size_t, Assignment& acc) -> bool {
      if (slot == size) {
        if (matches(acc)) {
          found = acc;
          return true;
        }
        return false;
      }
      const auto& ko = keys[pick[slot]];
      for (const auto& d : ko.options) {
        Assignment next = acc;
        if (d.kind == Decision::Kind::Chosen) {
          next.choose(LinkTest(ko.key, d.chosen));
        } else {
          for (const auto& v : d.denied) next.deny(LinkTest(ko.key, v));
        }
        if (options(slot + 1, 0, next)) return true;
      }
      return false;
    };
    subsets = [&](std::size_t slot, std::size_t start) -> bool {
      if (slot == size) {
        Assignment acc;
        return options(0, 0, acc);
      }
      for (std::size_t k = start; k < keys.size(); ++k) {
        pick[slot] = k;
        if (subsets(slot + 1, k + 1)) return true;
      }
      return false;
    };
    if (subsets(0, 0)) return found;
  }
  return std::nullopt;
}

}  // namespace pipekit
