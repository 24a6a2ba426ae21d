// Random Horn theories and a brute-force proof counter over the Herbrand
// base, independent of the prover.

#pragma once

#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pipekit/ebg.hpp"

namespace pipekit::testing {

/// Number of distinct proofs of a ground atom: one per matching fact, plus,
/// for each rule and each grounding of its variables whose head is the atom,
/// the product of its body literals' counts. Requires an acyclic theory.
class ProofCounter {
 public:
  ProofCounter(const Theory& th, const FactSet& facts, const Atom& goal) : th_(th), facts_(facts) {
    auto add = [&](const Atom& a) {
      for (const auto& t : a.args) {
        if (!t.is_var()) constants_.insert(t.name);
      }
    };
    for (const auto& r : th.rules()) {
      add(r.head);
      for (const auto& b : r.body) add(b);
    }
    for (const auto& f : facts.facts()) add(f.atom);
    add(goal);
  }

  std::uint64_t count(const Atom& ground) {
    std::string key = ground.to_string();
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::uint64_t total = 0;
    for (const auto& f : facts_.facts()) {
      if (f.atom == ground) ++total;
    }
    for (const auto& r : th_.rules()) {
      if (r.head.predicate != ground.predicate || r.head.args.size() != ground.args.size()) continue;
      std::vector<std::string> vars;
      auto note = [&](const Atom& a) {
        for (const auto& t : a.args) {
          if (t.is_var() && std::find(vars.begin(), vars.end(), t.name) == vars.end()) {
            vars.push_back(t.name);
          }
        }
      };
      note(r.head);
      for (const auto& b : r.body) note(b);
      Substitution theta;
      std::function<void(std::size_t)> assign = [&](std::size_t i) {
        if (i == vars.size()) {
          if (!(substitute(r.head, theta) == ground)) return;
          std::uint64_t product = 1;
          for (const auto& b : r.body) {
            product *= count(substitute(b, theta));
            if (product == 0) break;
          }
          total += product;
          return;
        }
        for (const auto& c : constants_) {
          theta[vars[i]] = Term::constant(c);
          assign(i + 1);
        }
        theta.erase(vars[i]);
      };
      assign(0);
    }
    memo_[key] = total;
    return total;
  }

 private:
  const Theory& th_;
  const FactSet& facts_;
  std::set<std::string> constants_;
  std::map<std::string, std::uint64_t> memo_;
};

struct TheoryCase {
  Theory theory;
  FactSet facts;
  Atom goal;
};

/// Acyclic, range-restricted theories: predicates sit on levels and rule
/// bodies only use lower levels, so every proof is finite.
class TheoryGenerator {
 public:
  explicit TheoryGenerator(std::uint64_t seed) : rng_(seed) {}

  TheoryCase next(std::size_t max_rules = 15) {
    std::vector<std::string> consts = {"a", "b", "c"};
    struct Pred {
      std::string name;
      std::size_t arity;
      int level;
    };
    std::vector<Pred> preds;
    int levels = 2 + pick(3);
    for (int l = 0; l < levels; ++l) {
      int width = 1 + pick(3);
      for (int w = 0; w < width; ++w) {
        preds.push_back({"p" + std::to_string(l) + "_" + std::to_string(w), 1 + pick(2), l});
      }
    }
    auto at_level = [&](int lo, int hi) {
      std::vector<const Pred*> out;
      for (const auto& p : preds) {
        if (p.level >= lo && p.level <= hi) out.push_back(&p);
      }
      return out;
    };

    std::vector<Fact> facts;
    for (const auto* p : at_level(0, levels - 2)) {
      std::size_t n = p->level == 0 ? 2 + pick(4) : pick(2);
      for (std::size_t i = 0; i < n; ++i) {
        Atom a{p->name, {}};
        for (std::size_t k = 0; k < p->arity; ++k) a.args.push_back(Term::constant(consts[pick(3)]));
        facts.push_back(Fact{"F" + std::to_string(facts.size() + 1), a});
      }
    }

    std::vector<Rule> rules;
    std::size_t wanted = 1 + pick(max_rules);
    const char* var_names[] = {"x", "y", "z"};
    for (std::size_t i = 0; i < wanted; ++i) {
      auto heads = at_level(1, levels - 1);
      const Pred* h = heads[pick(heads.size())];
      auto lower = at_level(0, h->level - 1);
      Rule r;
      r.id = "R" + std::to_string(i + 1);
      std::size_t body_len = 1 + pick(3);
      std::set<std::string> body_vars;
      for (std::size_t b = 0; b < body_len; ++b) {
        const Pred* q = lower[pick(lower.size())];
        Atom a{q->name, {}};
        for (std::size_t k = 0; k < q->arity; ++k) {
          if (coin(0.8)) {
            std::string v = var_names[pick(3)];
            body_vars.insert(v);
            a.args.push_back(Term::var(v));
          } else {
            a.args.push_back(Term::constant(consts[pick(3)]));
          }
        }
        r.body.push_back(std::move(a));
      }
      r.head.predicate = h->name;
      std::vector<std::string> vs(body_vars.begin(), body_vars.end());
      for (std::size_t k = 0; k < h->arity; ++k) {
        if (!vs.empty() && coin(0.85)) {
          r.head.args.push_back(Term::var(vs[pick(vs.size())]));
        } else {
          r.head.args.push_back(Term::constant(consts[pick(3)]));
        }
      }
      rules.push_back(std::move(r));
    }

    // Goal: a ground atom on a rule head predicate.
    const Rule& target = rules[pick(rules.size())];
    Atom goal{target.head.predicate, {}};
    for (std::size_t k = 0; k < target.head.args.size(); ++k) {
      goal.args.push_back(Term::constant(consts[pick(3)]));
    }
    return TheoryCase{Theory(std::move(rules)), FactSet(std::move(facts)), std::move(goal)};
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::mt19937_64 rng_;
};

}  // namespace pipekit::testing
