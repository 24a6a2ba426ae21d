// Generalization, frontiers, and program synthesis from explanations.

#include "pipekit/operationalizer.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>

namespace pipekit {

namespace {

Error malformed(const std::string& msg) { return Error(ErrorKind::MalformedTree, msg); }

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

class Regressor {
 public:
  explicit Regressor(const Theory& th) : th_(th) {}

  ExplanationTree run(const ExplanationTree& node, const Atom& target) {
    if (node.is_fact()) return ExplanationTree{target, ExplanationTree::Kind::Fact, node.id, {}, {}};
    const Rule* r = th_.rule(node.id);
    if (r == nullptr) throw malformed("no rule " + node.id + " in the theory");
    auto [copy, renaming] = rename_apart(*r, ++fresh_);
    auto s2 = unify(target, copy.head, s_);
    if (!s2) throw malformed("head of " + r->id + " does not match " + target.to_string());
    s_ = std::move(*s2);
    if (copy.body.size() != node.children.size()) {
      throw malformed(r->id + " has " + std::to_string(copy.body.size()) + " body literals but the node has " +
                      std::to_string(node.children.size()) + " children");
    }
    ExplanationTree out{target, ExplanationTree::Kind::Rule, r->id, renaming, {}};
    for (std::size_t i = 0; i < copy.body.size(); ++i) {
      const Atom& child = node.children[i].atom;
      if (child.predicate != copy.body[i].predicate || child.args.size() != copy.body[i].args.size()) {
        throw malformed("child " + child.to_string() + " of " + r->id + " does not match body literal " +
                        copy.body[i].to_string());
      }
      out.children.push_back(run(node.children[i], copy.body[i]));
    }
    return out;
  }

  const Substitution& substitution() const { return s_; }

 private:
  const Theory& th_;
  Substitution s_;
  std::size_t fresh_ = 0;
};

}  // namespace

ExplanationTree generalize(const ExplanationTree& tree, const Theory& theory) {
  Atom goal = tree.atom;
  if (!goal.args.empty() && !goal.args[0].is_var()) {
    Term identity = goal.args[0];
    for (auto& t : goal.args) {
      if (t == identity) t = Term::var("x");
    }
  }
  Regressor reg(theory);
  ExplanationTree out = reg.run(tree, goal);
  resolve_tree(out, reg.substitution());
  canonicalize_variables(out);
  return out;
}

// ---------------------------------------------------------------------------
// Frontiers

FrontierSpec FrontierSpec::at_predicates(std::set<std::string> preds) {
  if (preds.empty()) throw Error(ErrorKind::SyntaxError, "a predicate frontier needs at least one predicate");
  return {Mode::Predicates, std::move(preds), 0};
}

FrontierSpec FrontierSpec::parse(std::string_view text) {
  if (text == "root") return at_root();
  if (text == "leaves") return at_leaves();
  auto colon = text.find(':');
  std::string_view head = text.substr(0, colon);
  std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (head == "preds" && colon != std::string_view::npos) {
    std::set<std::string> preds;
    std::size_t start = 0;
    while (start <= rest.size()) {
      auto comma = rest.find(',', start);
      if (comma == std::string_view::npos) comma = rest.size();
      std::string name(rest.substr(start, comma - start));
      if (name.empty()) throw Error(ErrorKind::SyntaxError, "empty predicate name in frontier '" + std::string(text) + "'");
      preds.insert(std::move(name));
      start = comma + 1;
    }
    return at_predicates(std::move(preds));
  }
  if (head == "depth" && !rest.empty() &&
      std::all_of(rest.begin(), rest.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    return at_depth(std::stoul(std::string(rest)));
  }
  throw Error(ErrorKind::SyntaxError,
              "frontier must be root, leaves, preds:p1,p2 or depth:k, not '" + std::string(text) + "'");
}

std::string FrontierSpec::to_string() const {
  switch (mode) {
    case Mode::AtRoot: return "root";
    case Mode::AtLeaves: return "leaves";
    case Mode::Depth: return "depth:" + std::to_string(depth);
    case Mode::Predicates: {
      std::string out = "preds:";
      bool first = true;
      for (const auto& p : predicates) {
        if (!first) out += ",";
        out += p;
        first = false;
      }
      return out;
    }
  }
  return {};
}

OperationalizedExplanation cut(const ExplanationTree& generalized, const FrontierSpec& spec, std::string id) {
  if (!generalized.atom.args.empty() && !generalized.atom.args[0].is_var()) {
    throw malformed("root " + generalized.atom.to_string() + " still names a scenario; generalize it first");
  }
  OperationalizedExplanation op;
  op.id = std::move(id);
  op.generalized_goal = generalized.atom;
  std::function<CutNode(const ExplanationTree&, std::size_t)> walk = [&](const ExplanationTree& n,
                                                                         std::size_t depth) {
    bool open = false;
    switch (spec.mode) {
      case FrontierSpec::Mode::AtRoot: open = depth == 0; break;
      case FrontierSpec::Mode::AtLeaves: break;
      case FrontierSpec::Mode::Depth: open = depth == spec.depth; break;
      case FrontierSpec::Mode::Predicates: open = spec.predicates.count(n.atom.predicate) != 0; break;
    }
    if (open) {
      op.open_subgoals.push_back(n.atom);
      return CutNode{CutNode::Kind::Open, n.atom, "", {}};
    }
    if (n.is_fact()) return CutNode{CutNode::Kind::Fact, n.atom, n.id, {}};
    CutNode out{CutNode::Kind::Rule, n.atom, n.id, {}};
    for (const auto& c : n.children) out.children.push_back(walk(c, depth + 1));
    return out;
  };
  op.fixed = walk(generalized, 0);
  if (spec.mode == FrontierSpec::Mode::Predicates && op.open_subgoals.empty()) {
    throw Error(ErrorKind::FrontierMiss, "no node of " + generalized.atom.to_string() + " uses " + spec.to_string());
  }
  return op;
}

// ---------------------------------------------------------------------------
// JSON

json to_json(const CutNode& n) {
  json j{{"atom", n.atom.to_string()}};
  switch (n.kind) {
    case CutNode::Kind::Open: j["open"] = true; break;
    case CutNode::Kind::Fact: j["fact"] = n.id; break;
    case CutNode::Kind::Rule: {
      j["rule"] = n.id;
      j["children"] = json::array();
      for (const auto& c : n.children) j["children"].push_back(to_json(c));
      break;
    }
  }
  return j;
}

CutNode cut_node_from_json(const json& j) {
  if (!j.is_object() || !j.contains("atom") || !j["atom"].is_string()) {
    throw Error(ErrorKind::InvalidJson, "cut node needs an atom string");
  }
  CutNode n;
  n.atom = parse_atom(j["atom"].get<std::string>());
  if (j.contains("rule")) {
    n.kind = CutNode::Kind::Rule;
    n.id = j["rule"].get<std::string>();
    for (const auto& c : j.value("children", json::array())) n.children.push_back(cut_node_from_json(c));
  } else if (j.contains("fact")) {
    n.kind = CutNode::Kind::Fact;
    n.id = j["fact"].get<std::string>();
  } else {
    n.kind = CutNode::Kind::Open;
  }
  return n;
}

json to_json(const OperationalizedExplanation& op) {
  json open = json::array();
  for (const auto& a : op.open_subgoals) open.push_back(a.to_string());
  return json{{"id", op.id},
              {"generalized_goal", op.generalized_goal.to_string()},
              {"fixed", to_json(op.fixed)},
              {"open_subgoals", open}};
}

OperationalizedExplanation operationalized_from_json(const json& j) {
  try {
    OperationalizedExplanation op;
    op.id = j.at("id").get<std::string>();
    op.generalized_goal = parse_atom(j.at("generalized_goal").get<std::string>());
    op.fixed = cut_node_from_json(j.at("fixed"));
    for (const auto& a : j.at("open_subgoals")) op.open_subgoals.push_back(parse_atom(a.get<std::string>()));
    return op;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidJson, std::string("operationalized explanation: ") + e.what());
  }
}

json to_json(const ContentBinding& b) {
  return json{{"tuple", b.tuple}, {"page", b.page}, {"payload", b.payload}};
}

std::vector<ContentBinding> bindings_from_json(const json& j) {
  const json& list = j.is_object() && j.contains("bindings") ? j["bindings"] : j;
  if (!list.is_array()) throw Error(ErrorKind::InvalidJson, "bindings must be an array");
  std::vector<ContentBinding> out;
  try {
    for (const auto& b : list) {
      ContentBinding cb;
      for (const auto& [k, v] : b.at("tuple").items()) cb.tuple[k] = v.get<std::string>();
      cb.page = b.at("page").get<std::string>();
      cb.payload = b.value("payload", "");
      out.push_back(std::move(cb));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidJson, std::string("binding: ") + e.what());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Model generation

namespace {

// One way of completing a conjunction: the tests a user supplies, the
// variable bindings it implies, and a note when part of it is unbound.
struct Alt {
  std::vector<LinkTest> tests;
  Substitution s;
  std::string note;
};

class Compiler {
 public:
  Compiler(const Theory& th, const GenerateOptions& opts) : th_(th), opts_(opts) {}

  std::vector<Alt> conj(const std::vector<Atom>& atoms, Alt start, std::size_t depth) {
    std::vector<Alt> cur{std::move(start)};
    for (const auto& atom : atoms) {
      std::vector<Alt> next;
      for (const auto& c : cur) {
        for (auto& g : goal(atom, c.s, depth)) {
          Alt joined{c.tests, std::move(g.s), c.note};
          if (!join(joined.tests, g.tests)) continue;
          if (!g.note.empty()) joined.note += (joined.note.empty() ? "" : "; ") + g.note;
          next.push_back(std::move(joined));
          if (next.size() > opts_.max_paths) {
            throw Error(ErrorKind::BudgetExceeded,
                        "more than " + std::to_string(opts_.max_paths) + " ways to complete " + atom.to_string());
          }
        }
      }
      cur = std::move(next);
    }
    return cur;
  }

  std::vector<MutexGroup>& groups() { return groups_; }

 private:
  static std::optional<std::string> selection_key(const Atom& a) {
    constexpr std::string_view suffix = "select";
    const auto& p = a.predicate;
    if (a.args.size() != 2 || p.size() <= suffix.size() || !p.ends_with(suffix)) return std::nullopt;
    std::string key = capitalize(p.substr(0, p.size() - suffix.size()));
    if (!is_identifier(key)) return std::nullopt;
    return key;
  }

  std::vector<Alt> unbound(const Atom& a, const Substitution& s) {
    Atom shown = substitute(a, s);
    if (opts_.strict) {
      throw Error(ErrorKind::UnboundSubgoal, "no rule or selection mapping completes " + shown.to_string());
    }
    return {Alt{{}, s, "unbound " + shown.to_string()}};
  }

  // A goal's expansions depend on it only up to variable names, so they are
  // computed once and shared by every partial path that reaches it.
  std::vector<Alt> goal(const Atom& a, const Substitution& s, std::size_t depth) {
    Atom w = substitute(a, s);
    std::vector<std::string> vars;
    std::string key = w.predicate + "(";
    for (const auto& t : w.args) {
      if (!t.is_var()) {
        key += t.to_string() + ",";
        continue;
      }
      auto at = std::find(vars.begin(), vars.end(), t.name);
      key += "?" + std::to_string(at - vars.begin()) + ",";
      if (at == vars.end()) vars.push_back(t.name);
    }
    auto it = memo_.find(key);
    if (it == memo_.end()) {
      std::vector<Shared> entries;
      for (auto& alt : expand(a, s, depth)) {
        Shared e{std::move(alt.tests), {}, std::move(alt.note)};
        for (const auto& v : vars) {
          Term t = walk(Term::var(v), alt.s);
          if (t.is_var()) {
            auto j = std::find(vars.begin(), vars.end(), t.name);
            t = j == vars.end() ? Term::var({}) : Term::var(std::to_string(j - vars.begin()));
          }
          e.bound.push_back(std::move(t));
        }
        entries.push_back(std::move(e));
      }
      it = memo_.emplace(std::move(key), std::move(entries)).first;
    }
    std::vector<Alt> out;
    for (const auto& e : it->second) {
      Alt alt{e.tests, s, e.note};
      for (std::size_t i = 0; i < vars.size(); ++i) {
        const Term& b = e.bound[i];
        if (!b.is_var()) {
          alt.s[vars[i]] = b;
        } else if (!b.name.empty() && vars[std::stoul(b.name)] != vars[i]) {
          alt.s[vars[i]] = Term::var(vars[std::stoul(b.name)]);
        }
      }
      out.push_back(std::move(alt));
    }
    return out;
  }

  std::vector<Alt> expand(const Atom& a, const Substitution& s, std::size_t depth) {
    if (auto key = selection_key(a)) {
      Term value = walk(a.args[1], s);
      if (!value.is_var()) return {Alt{{LinkTest(*key, th_.spell(value.name))}, s, {}}};
      const auto* dom = th_.domain(a.predicate);
      if (dom == nullptr || dom->empty()) return unbound(a, s);
      std::vector<Alt> out;
      for (const auto& v : *dom) {
        Substitution s2 = s;
        s2[value.name] = Term::constant(v);
        out.push_back(Alt{{LinkTest(*key, th_.spell(v))}, std::move(s2), {}});
      }
      return out;
    }

    auto rules = th_.rules_for(a.predicate);
    if (rules.empty()) return unbound(a, s);
    if (depth >= opts_.max_depth) {
      throw Error(ErrorKind::DepthExceeded, "expanding " + substitute(a, s).to_string() + " needs more than " +
                                                std::to_string(opts_.max_depth) + " levels");
    }
    std::vector<const Rule*> used;
    std::vector<std::vector<Alt>> per_rule;
    for (const Rule* r : rules) {
      auto [copy, renaming] = rename_apart(*r, ++fresh_);
      auto s2 = unify(a, copy.head, s);
      if (!s2) continue;
      auto alts = conj(copy.body, Alt{{}, std::move(*s2), {}}, depth + 1);
      if (alts.empty()) continue;
      used.push_back(r);
      per_rule.push_back(std::move(alts));
    }
    if (per_rule.empty()) return {};  // every expansion contradicts itself
    if (per_rule.size() > 1 && needs_flags(used, per_rule)) add_flags(a, used, per_rule);

    std::vector<Alt> out;
    for (auto& alts : per_rule) {
      for (auto& alt : alts) out.push_back(std::move(alt));
    }
    return out;
  }

  // Alternatives introduced by a named concept are always offered as a
  // choice; selection-led ones only when their tests cannot tell them apart.
  bool needs_flags(const std::vector<const Rule*>& rules, const std::vector<std::vector<Alt>>& per_rule) const {
    for (const Rule* r : rules) {
      if (!r->body.empty() && !selection_key(r->body.front())) return true;
    }
    for (std::size_t i = 0; i < per_rule.size(); ++i) {
      for (std::size_t j = i + 1; j < per_rule.size(); ++j) {
        for (const auto& p : per_rule[i]) {
          for (const auto& q : per_rule[j]) {
            if (!diverge_exclusively(p.tests, q.tests)) return true;
          }
        }
      }
    }
    return false;
  }

  bool diverge_exclusively(const std::vector<LinkTest>& p, const std::vector<LinkTest>& q) const {
    std::size_t n = std::min(p.size(), q.size());
    for (std::size_t k = 0; k < n; ++k) {
      if (p[k] == q[k]) continue;
      return exclusive(p[k], q[k]);
    }
    return false;  // one is a prefix of the other
  }

  bool exclusive(const LinkTest& a, const LinkTest& b) const {
    if (a.key == b.key) return a.value != b.value;
    for (const auto& g : groups_) {
      if (g.contains(a) && g.contains(b)) return true;
    }
    return false;
  }

  void add_flags(const Atom& a, const std::vector<const Rule*>& rules, std::vector<std::vector<Alt>>& per_rule) {
    std::vector<std::string> names;
    bool concepts = true;
    for (const Rule* r : rules) {
      if (r->body.empty() || selection_key(r->body.front())) {
        concepts = false;
        break;
      }
      std::string name = capitalize(r->body.front().predicate);
      if (!is_identifier(name) || std::find(names.begin(), names.end(), name) != names.end() ||
          claimed_elsewhere(LinkTest(name), capitalize(a.predicate))) {
        concepts = false;
        break;
      }
      names.push_back(std::move(name));
    }
    if (!concepts) {
      names.clear();
      for (const Rule* r : rules) names.push_back(is_identifier(r->id) ? r->id : "Rule" + r->id);
    }

    std::string group = capitalize(a.predicate);
    auto it = std::find_if(groups_.begin(), groups_.end(), [&](const MutexGroup& g) { return g.name == group; });
    if (it == groups_.end()) {
      groups_.push_back(MutexGroup{group, {}});
      it = std::prev(groups_.end());
    }
    for (std::size_t i = 0; i < rules.size(); ++i) {
      LinkTest flag(names[i]);
      if (!it->contains(flag)) it->members.push_back(flag);
      for (auto& alt : per_rule[i]) alt.tests.insert(alt.tests.begin(), flag);
    }
  }

  // A test may sit in one declared group only.
  bool claimed_elsewhere(const LinkTest& flag, const std::string& group) const {
    return std::any_of(groups_.begin(), groups_.end(),
                       [&](const MutexGroup& g) { return g.name != group && g.contains(flag); });
  }

  // Appends `more`, merging repeats; false when a test contradicts one
  // already on the path.
  bool join(std::vector<LinkTest>& tests, const std::vector<LinkTest>& more) const {
    for (const auto& t : more) {
      bool dup = false;
      for (const auto& have : tests) {
        if (have == t) {
          dup = true;
          break;
        }
        if (exclusive(have, t)) return false;
      }
      if (!dup) tests.push_back(t);
    }
    return true;
  }

  // Expansion of one goal; `bound` holds, per goal variable, its constant,
  // the index of another goal variable it was unified with, or an empty var.
  struct Shared {
    std::vector<LinkTest> tests;
    std::vector<Term> bound;
    std::string note;
  };

  const Theory& th_;
  GenerateOptions opts_;
  std::size_t fresh_ = 0;
  std::vector<MutexGroup> groups_;
  std::map<std::string, std::vector<Shared>> memo_;
};

struct GenPath {
  std::vector<LinkTest> tests;
  std::string op_id;
  std::string note;
  bool fixes_nothing = false;
};

struct Trie {
  struct NodeData {
    std::vector<std::pair<LinkTest, std::size_t>> kids;
    std::optional<std::size_t> terminal;  // index into paths
  };
  std::vector<NodeData> nodes{1};

  void insert(const std::vector<LinkTest>& tests, std::size_t path) {
    std::size_t at = 0;
    for (const auto& t : tests) {
      auto& kids = nodes[at].kids;
      auto it = std::find_if(kids.begin(), kids.end(), [&](const auto& k) { return k.first == t; });
      if (it != kids.end()) {
        at = it->second;
        continue;
      }
      nodes.push_back({});
      nodes[at].kids.emplace_back(t, nodes.size() - 1);
      at = nodes.size() - 1;
    }
    if (!nodes[at].terminal) nodes[at].terminal = path;
  }
};

std::string join_tests(const std::vector<LinkTest>& tests) {
  std::string out;
  for (const auto& t : tests) {
    if (!out.empty()) out += "/";
    out += t.to_string();
  }
  return out;
}

}  // namespace

Program generate_model(const Theory& theory, const std::vector<OperationalizedExplanation>& ops,
                       const std::vector<ContentBinding>& bindings, GenerateOptions opts) {
  if (ops.empty()) throw Error(ErrorKind::EmptyMap, "no operationalized explanations to compile");
  Compiler compiler(theory, opts);
  std::vector<GenPath> paths;
  for (const auto& op : ops) {
    std::vector<LinkTest> prefix;
    if (ops.size() > 1) prefix.emplace_back(std::string(kExplanationKey), op.id);
    if (op.fixes_nothing()) {
      paths.push_back(GenPath{prefix, op.id, {}, true});
      continue;
    }
    for (auto& alt : compiler.conj(op.open_subgoals, Alt{}, 0)) {
      std::vector<LinkTest> tests = prefix;
      tests.insert(tests.end(), alt.tests.begin(), alt.tests.end());
      paths.push_back(GenPath{std::move(tests), op.id, std::move(alt.note), false});
    }
  }
  if (paths.empty()) {
    throw Error(ErrorKind::UnboundSubgoal, "no combination of rules completes the open subgoals consistently");
  }
  auto& groups = compiler.groups();

  // Group names must not shadow test keys, or key=value input would be read
  // as a flag choice.
  std::set<std::string> keys;
  std::set<LinkTest> all_tests;
  for (const auto& p : paths) {
    for (const auto& t : p.tests) {
      all_tests.insert(t);
      if (!t.is_flag()) keys.insert(t.key);
    }
  }
  for (auto& g : groups) {
    while (keys.count(g.name) != 0) g.name += "Choice";
  }

  auto resolve = [&](const std::string& key, const std::string& value) {
    for (const auto& g : groups) {
      if (g.name == key && g.contains(LinkTest(value))) return LinkTest(value);
    }
    if (value == kFlagValue) return LinkTest(key);
    LinkTest literal(key, value);
    if (all_tests.count(literal) != 0) return literal;
    return LinkTest(key, theory.spell(value));
  };
  std::map<std::set<LinkTest>, std::size_t> bound;
  for (std::size_t i = 0; i < bindings.size(); ++i) {
    std::set<LinkTest> tuple;
    for (const auto& [k, v] : bindings[i].tuple) tuple.insert(resolve(k, v));
    if (!bound.emplace(std::move(tuple), i).second) {
      throw Error(ErrorKind::InvalidJson, "two bindings share the tuple of page " + bindings[i].page);
    }
  }

  Trie trie;
  for (std::size_t i = 0; i < paths.size(); ++i) trie.insert(paths[i].tests, i);

  std::set<std::size_t> reached;
  auto content_for = [&](const GenPath& p) {
    std::set<LinkTest> key(p.tests.begin(), p.tests.end());
    if (auto it = bound.find(key); it != bound.end()) {
      reached.insert(it->second);
      const auto& b = bindings[it->second];
      return Node::content(b.page, b.payload);
    }
    std::string ref = p.tests.empty() ? p.op_id : join_tests(p.tests);
    std::string payload(kIncomplete);
    if (!p.note.empty()) payload += ": " + p.note;
    return Node::content(ref, payload);
  };
  std::function<Node(std::size_t)> build = [&](std::size_t at) {
    const auto& n = trie.nodes[at];
    std::optional<Node> leaf;
    if (n.terminal) leaf = content_for(paths[*n.terminal]);
    if (n.kids.empty()) return *leaf;
    std::vector<Arm> arms;
    for (const auto& [t, child] : n.kids) arms.push_back(Arm{t, build(child)});
    Node chain = Node::chain(std::move(arms));
    if (!leaf) return chain;
    return Node::seq({*leaf, chain});
  };
  Node root = build(0);

  if (!opts.allow_unreachable) {
    for (std::size_t i = 0; i < bindings.size(); ++i) {
      if (reached.count(i) == 0) {
        std::string tuple;
        for (const auto& [k, v] : bindings[i].tuple) tuple += (tuple.empty() ? "" : ", ") + k + "=" + v;
        throw Error(ErrorKind::UnreachableBinding,
                    "page " + bindings[i].page + " is bound to {" + tuple + "}, which no generated path completes");
      }
    }
  }
  return Program(groups, std::move(root));
}

// ---------------------------------------------------------------------------
// Assessment

json to_json(const OperationalityRow& r) {
  return json{{"spec", r.spec.to_string()},
              {"personable_ratio", r.personable_ratio},
              {"complete_only_ratio", r.complete_only_ratio},
              {"model_size", r.model_size},
              {"report", to_json(r.report)}};
}

std::vector<OperationalityRow> assess_operationality(const Theory& theory, const std::vector<Scenario>& scenarios,
                                                     const std::vector<FrontierSpec>& specs,
                                                     const std::vector<Activity>& probes,
                                                     const std::vector<ContentBinding>& bindings) {
  if (specs.empty()) throw Error(ErrorKind::EmptyMap, "no frontier specs to assess");
  std::vector<std::pair<std::string, ExplanationTree>> general;
  for (const auto& s : scenarios) general.emplace_back(s.id, generalize(s.tree, theory));

  std::vector<OperationalityRow> rows;
  for (const auto& spec : specs) {
    std::vector<OperationalizedExplanation> ops;
    for (const auto& [id, tree] : general) ops.push_back(cut(tree, spec, id));
    GenerateOptions opts;
    opts.allow_unreachable = true;  // a binding written for one frontier need not exist under another
    Program model = generate_model(theory, ops, bindings, opts);
    OperationalityRow row;
    row.spec = spec;
    row.report = evaluate_coverage(model, probes);
    row.personable_ratio = row.report.personable_ratio();
    row.complete_only_ratio = row.report.complete_only_ratio();
    row.model_size = node_count(model.root());
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const OperationalityRow& a, const OperationalityRow& b) {
    if (a.personable_ratio != b.personable_ratio) return a.personable_ratio > b.personable_ratio;
    return a.model_size < b.model_size;
  });
  return rows;
}

}  // namespace pipekit
