// Backward chaining over a theory and a fact set, with proof trees.

#include <algorithm>
#include <functional>

#include "pipekit/ebg.hpp"

namespace pipekit {

std::pair<Rule, Substitution> rename_apart(const Rule& r, std::size_t n) {
  Substitution map;
  auto rename = [&](const Atom& a) {
    Atom out{a.predicate, {}};
    for (const auto& t : a.args) {
      if (!t.is_var()) {
        out.args.push_back(t);
        continue;
      }
      auto it = map.find(t.name);
      if (it == map.end()) it = map.emplace(t.name, Term::var(t.name + "#" + std::to_string(n))).first;
      out.args.push_back(it->second);
    }
    return out;
  };
  Rule copy{r.id, rename(r.head), {}};
  for (const auto& b : r.body) copy.body.push_back(rename(b));
  return {std::move(copy), std::move(map)};
}

void resolve_tree(ExplanationTree& t, const Substitution& s) {
  t.atom = substitute(t.atom, s);
  for (auto& [k, v] : t.bindings) v = walk(v, s);
  for (auto& c : t.children) resolve_tree(c, s);
}

void canonicalize_variables(ExplanationTree& t) {
  std::map<std::string, std::string> names;
  std::set<std::string> taken;
  auto canon = [&](Term& term) {
    if (!term.is_var()) return;
    auto it = names.find(term.name);
    if (it == names.end()) {
      std::string base = term.name.substr(0, term.name.find('#'));
      std::string pick = base;
      for (int n = 2; taken.count(pick) != 0; ++n) pick = base + std::to_string(n);
      taken.insert(pick);
      it = names.emplace(term.name, pick).first;
    }
    term.name = it->second;
  };
  std::function<void(ExplanationTree&)> visit = [&](ExplanationTree& n) {
    for (auto& a : n.atom.args) canon(a);
    for (auto& [k, v] : n.bindings) canon(v);
    for (auto& c : n.children) visit(c);
  };
  visit(t);
}

namespace {

using Found = std::function<bool(ExplanationTree, const Substitution&)>;
using Done = std::function<bool(const Substitution&)>;

class Prover {
 public:
  Prover(const Theory& th, const FactSet& facts, ProofLimits limits)
      : th_(th), limits_(limits) {
    for (const auto& f : facts.facts()) {
      if (auto n = th.arity(f.atom.predicate); n && *n != f.atom.args.size()) {
        throw Error(ErrorKind::ArityMismatch, "fact " + f.id + " uses " + f.atom.predicate + " with " +
                                                  std::to_string(f.atom.args.size()) +
                                                  " arguments, the theory with " + std::to_string(*n));
      }
      by_pred_[f.atom.predicate].push_back(&f);
    }
  }

  // Returns true to stop the search.
  bool prove(const Atom& goal, const Substitution& s, std::size_t depth, const Found& k) {
    if (auto it = by_pred_.find(goal.predicate); it != by_pred_.end()) {
      for (const Fact* f : it->second) {
        auto s2 = unify(goal, f->atom, s);
        if (!s2) continue;
        ExplanationTree leaf{goal, ExplanationTree::Kind::Fact, f->id, {}, {}};
        if (k(std::move(leaf), *s2)) return true;
      }
    }
    for (const Rule* r : th_.rules_for(goal.predicate)) {
      if (depth >= limits_.max_depth) {
        depth_hit = true;
        return false;
      }
      auto [copy, renaming] = rename_apart(*r, ++fresh_);
      auto s2 = unify(goal, copy.head, s);
      if (!s2) continue;
      std::vector<ExplanationTree> kids;
      const Substitution& bindings = renaming;
      bool stop = prove_body(copy.body, 0, *s2, depth + 1, kids, [&](const Substitution& s3) {
        ExplanationTree node{goal, ExplanationTree::Kind::Rule, r->id, bindings, kids};
        return k(std::move(node), s3);
      });
      if (stop) return true;
    }
    return false;
  }

  bool depth_hit = false;

 private:
  bool prove_body(const std::vector<Atom>& body, std::size_t i, const Substitution& s,
                  std::size_t depth, std::vector<ExplanationTree>& kids, const Done& done) {
    if (i == body.size()) return done(s);
    return prove(body[i], s, depth, [&](ExplanationTree t, const Substitution& s2) {
      kids.push_back(std::move(t));
      bool stop = prove_body(body, i + 1, s2, depth, kids, done);
      kids.pop_back();
      return stop;
    });
  }

  const Theory& th_;
  ProofLimits limits_;
  std::map<std::string, std::vector<const Fact*>> by_pred_;
  std::size_t fresh_ = 0;
};

ProofSet search(const Theory& th, const FactSet& facts, const Atom& goal, ProofLimits limits,
                std::size_t want) {
  if (auto n = th.arity(goal.predicate); n && *n != goal.args.size()) {
    throw Error(ErrorKind::ArityMismatch, "goal " + goal.to_string() + " has the wrong arity");
  }
  ProofSet out;
  Prover prover(th, facts, limits);
  prover.prove(goal, {}, 0, [&](ExplanationTree t, const Substitution& s) {
    resolve_tree(t, s);
    canonicalize_variables(t);
    out.trees.push_back(std::move(t));
    if (out.trees.size() >= want) {
      out.capped = want == limits.max_solutions;
      return true;
    }
    return false;
  });
  out.depth_exceeded = prover.depth_hit;
  return out;
}

}  // namespace

std::optional<ExplanationTree> explain(const Theory& th, const FactSet& facts, const Atom& goal,
                                       ProofLimits limits) {
  auto found = search(th, facts, goal, limits, 1);
  if (!found.trees.empty()) return std::move(found.trees.front());
  if (found.depth_exceeded) {
    throw Error(ErrorKind::DepthExceeded, "no proof of " + goal.to_string() + " within depth " +
                                              std::to_string(limits.max_depth));
  }
  return std::nullopt;
}

ProofSet explain_all(const Theory& th, const FactSet& facts, const Atom& goal, ProofLimits limits) {
  return search(th, facts, goal, limits, std::max<std::size_t>(limits.max_solutions, 1));
}

namespace {

Verification check(const Theory& th, const FactSet& facts, const ExplanationTree& t,
                   const std::string& path) {
  auto fail = [&](const std::string& msg) { return Verification{false, path, msg}; };
  if (t.is_fact()) {
    const Fact* f = facts.find(t.id);
    if (f == nullptr) return fail("no fact " + t.id);
    if (!(f->atom == t.atom)) {
      return fail("fact " + t.id + " is " + f->atom.to_string() + ", not " + t.atom.to_string());
    }
    return {};
  }
  const Rule* r = th.rule(t.id);
  if (r == nullptr) return fail("no rule " + t.id);
  if (!(substitute(r->head, t.bindings) == t.atom)) {
    return fail("head of " + t.id + " gives " + substitute(r->head, t.bindings).to_string() + ", not " +
                t.atom.to_string());
  }
  if (r->body.size() != t.children.size()) {
    return fail(t.id + " has " + std::to_string(r->body.size()) + " body literals but " +
                std::to_string(t.children.size()) + " children");
  }
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    std::string sub = path.empty() ? std::to_string(i) : path + "/" + std::to_string(i);
    Atom want = substitute(r->body[i], t.bindings);
    if (!(want == t.children[i].atom)) {
      return Verification{false, sub,
                          "body literal " + want.to_string() + " of " + t.id + " does not match " +
                              t.children[i].atom.to_string()};
    }
    if (auto v = check(th, facts, t.children[i], sub); !v) return v;
  }
  return {};
}

void leaves(const ExplanationTree& t, std::set<std::string>& out) {
  if (t.is_fact()) out.insert(t.id);
  for (const auto& c : t.children) leaves(c, out);
}

}  // namespace

Verification verify_explanation(const Theory& th, const FactSet& facts, const ExplanationTree& t) {
  return check(th, facts, t, "");
}

std::set<std::string> unused_facts(const ExplanationTree& t, const FactSet& facts) {
  std::set<std::string> used;
  leaves(t, used);
  std::set<std::string> out;
  for (const auto& f : facts.facts()) {
    if (used.count(f.id) == 0) out.insert(f.id);
  }
  return out;
}

std::optional<ExplanationTree> instantiate(const ExplanationTree& t, const FactSet& facts) {
  Substitution s;
  bool ok = true;
  std::function<void(const ExplanationTree&)> visit = [&](const ExplanationTree& n) {
    if (!ok) return;
    if (n.is_fact()) {
      const Fact* f = facts.find(n.id);
      std::optional<Substitution> s2;
      if (f != nullptr) s2 = unify(n.atom, f->atom, s);
      if (!s2) {
        ok = false;
        return;
      }
      s = std::move(*s2);
    }
    for (const auto& c : n.children) visit(c);
  };
  visit(t);
  if (!ok) return std::nullopt;
  ExplanationTree out = t;
  resolve_tree(out, s);
  return out;
}

}  // namespace pipekit
