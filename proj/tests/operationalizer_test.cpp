#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "pipekit/factorization.hpp"
#include "pipekit/operationalizer.hpp"
#include "pipekit/specializer.hpp"
#include "test_support.hpp"

using namespace pipekit;
using pipekit::testing::fixture_json;
using pipekit::testing::read_fixture;

namespace {

ErrorKind error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected pipekit::Error";
  return ErrorKind::IoError;
}

Theory political() { return parse_theory(read_fixture("politicalinfo.theory")); }

ExplanationTree scenario_tree(const std::string& facts, const std::string& goal) {
  auto t = explain(political(), parse_facts(read_fixture(facts)), parse_goal(goal));
  if (!t) throw std::runtime_error("fixture scenario unprovable: " + goal);
  return *t;
}

ExplanationTree nancy_tree() { return scenario_tree("nancy.facts", "politicalinfo(x47)"); }
ExplanationTree nancy_general() { return generalize(nancy_tree(), political()); }

std::vector<Scenario> three_scenarios() {
  return {{"nancy", nancy_tree()},
          {"president", scenario_tree("president.facts", "politicalinfo(x52)")},
          {"representative", scenario_tree("representative.facts", "politicalinfo(x61)")}};
}

std::vector<ContentBinding> nancy_bindings() { return bindings_from_json(fixture_json("nancy_bindings.json")); }

Program nancy_model() {
  auto op = cut(nancy_general(), FrontierSpec::at_predicates({"member", "aspect"}), "nancy");
  return generate_model(political(), {op}, nancy_bindings());
}

const ExplanationTree* find_pred(const ExplanationTree& t, const std::string& pred) {
  if (t.atom.predicate == pred) return &t;
  for (const auto& c : t.children) {
    if (auto* hit = find_pred(c, pred)) return hit;
  }
  return nullptr;
}

bool mentions(const Atom& a, const std::string& constant) {
  return std::any_of(a.args.begin(), a.args.end(), [&](const Term& t) { return !t.is_var() && t.name == constant; });
}

bool tree_mentions(const ExplanationTree& t, const std::string& constant) {
  if (mentions(t.atom, constant)) return true;
  return std::any_of(t.children.begin(), t.children.end(),
                     [&](const ExplanationTree& c) { return tree_mentions(c, constant); });
}

std::vector<std::pair<std::string, std::string>> as_pairs(const std::vector<LinkTest>& tests) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& t : tests) out.emplace_back(t.key, t.value);
  return out;
}

std::string replay(const Program& p, const std::vector<std::pair<std::string, std::string>>& pairs) {
  auto r = specialize(p, assignment_from_pairs(p, pairs));
  if (!r.residual.root().is_content()) return "<not complete>";
  return r.residual.root().ref();
}

}  // namespace

// ---------------------------------------------------------------------------
// generalize

TEST(Generalize, NancyTreeLosesTheScenarioConstant) {
  auto g = nancy_general();
  EXPECT_EQ(g.atom.to_string(), "politicalinfo(x)");
  EXPECT_FALSE(tree_mentions(g, "x47"));
  // The state came from a fact and becomes a variable; the seat, aspect and
  // office are written into the rules and stay.
  EXPECT_EQ(find_pred(g, "stateselect")->atom.to_string(), "stateselect(x, s)");
  EXPECT_EQ(find_pred(g, "seatselect")->atom.to_string(), R"(seatselect(x, "Junior Seat"))");
  EXPECT_EQ(find_pred(g, "aspectselect")->atom.to_string(), R"(aspectselect(x, "Committee Memberships"))");
  EXPECT_EQ(find_pred(g, "officeselect")->atom.to_string(), R"(officeselect(x, "Congress"))");
}

TEST(Generalize, KeepsRuleAndFactStructure) {
  auto t = nancy_tree();
  auto g = generalize(t, political());
  std::function<void(const ExplanationTree&, const ExplanationTree&)> same = [&](const ExplanationTree& a,
                                                                                const ExplanationTree& b) {
    EXPECT_EQ(a.kind, b.kind);
    EXPECT_EQ(a.id, b.id);
    EXPECT_EQ(a.atom.predicate, b.atom.predicate);
    ASSERT_EQ(a.children.size(), b.children.size());
    for (std::size_t i = 0; i < a.children.size(); ++i) same(a.children[i], b.children[i]);
  };
  same(t, g);
}

TEST(Generalize, ReinstantiatingWithTheScenarioFactsGivesTheProofBack) {
  auto t = nancy_tree();
  auto facts = parse_facts(read_fixture("nancy.facts"));
  auto back = instantiate(nancy_general(), facts);
  ASSERT_TRUE(back.has_value());
  EXPECT_TRUE(verify_explanation(political(), facts, *back).ok);
  EXPECT_EQ(*back, t);
}

TEST(Generalize, FactLeafKeepsConstantsExceptIdentity) {
  auto th = political();
  auto t = scenario_tree("nancy.facts", R"(officeselect(x47, "Congress"))");
  ASSERT_TRUE(t.is_fact());
  auto g = generalize(t, th);
  EXPECT_TRUE(g.is_fact());
  EXPECT_EQ(g.id, "F1");
  EXPECT_EQ(g.atom.to_string(), R"(officeselect(x, "Congress"))");
}

TEST(Generalize, RuleConstantsStayFactConstantsGo) {
  auto th = parse_theory("R1: g(x) <= p(x, \"c\").\nR2: h(x) <= p(x, y).");
  auto facts = parse_facts("F1: p(a, c).");
  auto g1 = generalize(*explain(th, facts, parse_goal("g(a)")), th);
  EXPECT_EQ(g1.atom.to_string(), "g(x)");
  EXPECT_EQ(g1.children.at(0).atom.to_string(), R"(p(x, "c"))");
  auto g2 = generalize(*explain(th, facts, parse_goal("h(a)")), th);
  EXPECT_EQ(g2.children.at(0).atom.to_string(), "p(x, y)");
}

TEST(Generalize, RejectsTreesThatDoNotFollowTheTheory) {
  auto th = political();
  auto t = nancy_tree();
  auto unknown = t;
  unknown.id = "R99";
  EXPECT_EQ(error_of([&] { generalize(unknown, th); }), ErrorKind::MalformedTree);
  auto short_body = t;
  short_body.children.at(0).children.pop_back();
  EXPECT_EQ(error_of([&] { generalize(short_body, th); }), ErrorKind::MalformedTree);
  auto wrong_rule = t;
  wrong_rule.children.at(0).id = "R3";  // complete <= officeselect & aspect
  EXPECT_EQ(error_of([&] { generalize(wrong_rule, th); }), ErrorKind::MalformedTree);
}

// ---------------------------------------------------------------------------
// cut

TEST(Cut, MemberAndAspectFrontier) {
  auto op = cut(nancy_general(), FrontierSpec::at_predicates({"member", "aspect"}), "nancy");
  ASSERT_EQ(op.open_subgoals.size(), 2u);
  EXPECT_EQ(op.open_subgoals[0].to_string(), "member(x)");
  EXPECT_EQ(op.open_subgoals[1].to_string(), "aspect(x)");
  EXPECT_EQ(op.generalized_goal.to_string(), "politicalinfo(x)");
  // Fixed: R1 over R2 over the office selection, with the two open slots.
  EXPECT_EQ(op.fixed.kind, CutNode::Kind::Rule);
  EXPECT_EQ(op.fixed.id, "R1");
  const auto& r2 = op.fixed.children.at(0);
  EXPECT_EQ(r2.id, "R2");
  ASSERT_EQ(r2.children.size(), 3u);
  EXPECT_EQ(r2.children[0].kind, CutNode::Kind::Fact);
  EXPECT_EQ(r2.children[0].atom.to_string(), R"(officeselect(x, "Congress"))");
  EXPECT_EQ(r2.children[1].kind, CutNode::Kind::Open);
  EXPECT_EQ(r2.children[2].kind, CutNode::Kind::Open);
}

TEST(Cut, AtRootFixesNothing) {
  auto op = cut(nancy_general(), FrontierSpec::at_root());
  EXPECT_TRUE(op.fixes_nothing());
  ASSERT_EQ(op.open_subgoals.size(), 1u);
  EXPECT_EQ(op.open_subgoals[0].to_string(), "politicalinfo(x)");
  auto zero = cut(nancy_general(), FrontierSpec::at_depth(0));
  EXPECT_EQ(zero.fixed, op.fixed);
  EXPECT_EQ(zero.open_subgoals, op.open_subgoals);
}

TEST(Cut, AtLeavesFreezesEverything) {
  auto g = nancy_general();
  auto op = cut(g, FrontierSpec::at_leaves());
  EXPECT_TRUE(op.open_subgoals.empty());
  std::function<void(const CutNode&, const ExplanationTree&)> same = [&](const CutNode& c, const ExplanationTree& t) {
    EXPECT_NE(c.kind, CutNode::Kind::Open);
    EXPECT_EQ(c.id, t.id);
    EXPECT_EQ(c.atom, t.atom);
    ASSERT_EQ(c.children.size(), t.children.size());
    for (std::size_t i = 0; i < t.children.size(); ++i) same(c.children[i], t.children[i]);
  };
  same(op.fixed, g);
}

TEST(Cut, DepthOpensEveryNodeAtThatLevel) {
  auto op = cut(nancy_general(), FrontierSpec::at_depth(2));
  ASSERT_EQ(op.open_subgoals.size(), 3u);
  EXPECT_EQ(op.open_subgoals[0].predicate, "officeselect");
  EXPECT_EQ(op.open_subgoals[1].predicate, "member");
  EXPECT_EQ(op.open_subgoals[2].predicate, "aspect");
  EXPECT_TRUE(cut(nancy_general(), FrontierSpec::at_depth(40)).open_subgoals.empty());
}

TEST(Cut, OpenAndFixedReassembleTheTree) {
  auto g = nancy_general();
  for (const char* spec : {"root", "leaves", "preds:member,aspect", "preds:senator", "depth:1", "depth:3"}) {
    auto op = cut(g, FrontierSpec::parse(spec));
    std::vector<Atom> open;
    std::function<void(const CutNode&, const ExplanationTree&)> walk = [&](const CutNode& c,
                                                                           const ExplanationTree& t) {
      ASSERT_EQ(c.atom, t.atom) << spec;
      if (c.kind == CutNode::Kind::Open) {
        open.push_back(c.atom);
        return;
      }
      EXPECT_EQ(c.id, t.id);
      ASSERT_EQ(c.children.size(), t.children.size());
      for (std::size_t i = 0; i < t.children.size(); ++i) walk(c.children[i], t.children[i]);
    };
    walk(op.fixed, g);
    EXPECT_EQ(open, op.open_subgoals) << spec;
  }
}

TEST(Cut, Errors) {
  auto g = nancy_general();
  EXPECT_EQ(error_of([&] { cut(g, FrontierSpec::at_predicates({"president"})); }), ErrorKind::FrontierMiss);
  EXPECT_EQ(error_of([&] { cut(nancy_tree(), FrontierSpec::at_root()); }), ErrorKind::MalformedTree);
}

TEST(FrontierSpecText, RoundTripsAndRejectsJunk) {
  for (const char* s : {"root", "leaves", "preds:aspect,member", "depth:0", "depth:12"}) {
    EXPECT_EQ(FrontierSpec::parse(s).to_string(), s);
  }
  EXPECT_EQ(FrontierSpec::parse("preds:member,aspect"), FrontierSpec::at_predicates({"aspect", "member"}));
  for (const char* s : {"", "top", "preds:", "preds:a,,b", "depth:", "depth:-1", "depth:two"}) {
    EXPECT_EQ(error_of([&] { FrontierSpec::parse(s); }), ErrorKind::SyntaxError) << s;
  }
}

TEST(OperationalizedJson, RoundTrips) {
  for (const char* spec : {"root", "leaves", "preds:member,aspect"}) {
    auto op = cut(nancy_general(), FrontierSpec::parse(spec), "nancy");
    auto back = operationalized_from_json(json::parse(to_json(op).dump()));
    EXPECT_EQ(back.id, op.id);
    EXPECT_EQ(back.generalized_goal, op.generalized_goal);
    EXPECT_EQ(back.fixed, op.fixed);
    EXPECT_EQ(back.open_subgoals, op.open_subgoals);
  }
  EXPECT_EQ(error_of([] { operationalized_from_json(json{{"id", "a"}}); }), ErrorKind::InvalidJson);
}

// ---------------------------------------------------------------------------
// generate_model

TEST(GenerateModel, NancyFrontierGivesTheCongressBrowser) {
  auto p = nancy_model();
  auto paths = enumerate_paths(p);
  // Representatives: 3 states x 2 districts; senators: 3 states x 2 seats;
  // each with 4 aspects.
  EXPECT_EQ(paths.size(), 48u);
  std::vector<LinkTest> want = {LinkTest("Senator"), LinkTest("Branch", "Senate"), LinkTest("State", "NC"),
                                LinkTest("Seat", "Junior"), LinkTest("Aspect", "CommitteeMemberships")};
  auto hit = std::find_if(paths.begin(), paths.end(), [&](const Path& path) { return path.tests == want; });
  ASSERT_NE(hit, paths.end());
  EXPECT_EQ(hit->ref, "committees-nc-junior-senator");

  ASSERT_TRUE(p.root().is_chain());
  ASSERT_EQ(p.root().arms().size(), 2u);
  EXPECT_EQ(p.root().arms()[0].test, LinkTest("Representative"));
  EXPECT_EQ(p.root().arms()[1].test, LinkTest("Senator"));
  ASSERT_NE(p.group_named("Member"), nullptr);
  EXPECT_EQ(*p.group_named("Member"), (MutexGroup{"Member", {LinkTest("Representative"), LinkTest("Senator")}}));

  std::set<std::string> aspects;
  for (const auto& path : paths) aspects.insert(path.tests.back().value);
  EXPECT_EQ(aspects, (std::set<std::string>{"Education", "CommitteeMemberships", "HomeCity", "BillsProposed"}));
}

TEST(GenerateModel, NestingFollowsBodyOrder) {
  auto p = nancy_model();
  const Node* n = &p.root().arms()[1].body;  // Senator
  std::vector<std::string> keys;
  while (n->is_chain()) {
    keys.push_back(n->arms()[0].test.key);
    n = &n->arms()[0].body;
  }
  EXPECT_EQ(keys, (std::vector<std::string>{"Branch", "State", "Seat", "Aspect"}));
}

TEST(GenerateModel, UnboundTuplesGetMarkedPlaceholders) {
  auto p = nancy_model();
  std::size_t placeholders = 0;
  for (const auto& path : enumerate_paths(p)) {
    std::function<const Node*(const Node&)> find = [&](const Node& n) -> const Node* {
      if (n.is_content()) return n.ref() == path.ref ? &n : nullptr;
      for (const auto& a : n.arms()) {
        if (auto* h = find(a.body)) return h;
      }
      for (const auto& c : n.children()) {
        if (auto* h = find(c)) return h;
      }
      return nullptr;
    };
    const Node* leaf = find(p.root());
    ASSERT_NE(leaf, nullptr);
    if (leaf->payload() == kIncomplete) ++placeholders;
  }
  EXPECT_EQ(placeholders, 46u);
}

TEST(GenerateModel, BoundTuplesReplayToTheirPages) {
  auto p = nancy_model();
  auto paths = enumerate_paths(p);
  for (const auto& b : nancy_bindings()) {
    auto hit = std::find_if(paths.begin(), paths.end(), [&](const Path& x) { return x.ref == b.page; });
    ASSERT_NE(hit, paths.end()) << b.page;
    EXPECT_EQ(replay(p, as_pairs(hit->tests)), b.page);
  }
  // The senator tuple is written in test spelling and replays as given.
  const auto senator = nancy_bindings()[0];
  EXPECT_EQ(replay(p, {senator.tuple.begin(), senator.tuple.end()}), senator.page);
}

TEST(GenerateModel, BindingsMayUseRawConstants) {
  // "Virginia" and "Bills Proposed" are spelled as tests VA and BillsProposed.
  auto p = nancy_model();
  auto paths = enumerate_paths(p);
  EXPECT_TRUE(std::any_of(paths.begin(), paths.end(), [](const Path& x) { return x.ref == "bills-va-littletown"; }));
}

TEST(GenerateModel, FrozenExplanationIsOnePage) {
  auto op = cut(nancy_general(), FrontierSpec::at_leaves(), "nancy");
  auto p = generate_model(political(), {op}, {});
  ASSERT_TRUE(p.root().is_content());
  EXPECT_EQ(p.root().ref(), "nancy");
  EXPECT_EQ(p.root().payload(), kIncomplete);
  auto bound = generate_model(political(), {op}, {ContentBinding{{}, "nancy-committees", "Details about committees"}});
  EXPECT_EQ(bound.root().ref(), "nancy-committees");
}

TEST(GenerateModel, RootFrontierGivesNoPersonalization) {
  auto op = cut(nancy_general(), FrontierSpec::at_root(), "nancy");
  auto p = generate_model(political(), {op}, {});
  EXPECT_TRUE(p.root().is_content());
  EXPECT_TRUE(is_complete(p));
}

TEST(GenerateModel, LeafFrozenScenariosBecomeATopLevelSwitch) {
  std::vector<OperationalizedExplanation> ops;
  for (const auto& s : three_scenarios()) ops.push_back(cut(generalize(s.tree, political()), FrontierSpec::at_leaves(), s.id));
  auto p = generate_model(political(), ops, {});
  ASSERT_TRUE(p.root().is_chain());
  ASSERT_EQ(p.root().arms().size(), 3u);
  for (const auto& arm : p.root().arms()) {
    EXPECT_EQ(arm.test.key, kExplanationKey);
    EXPECT_TRUE(arm.body.is_content());
  }
  // Replaying any one of them is all the model offers.
  for (const char* id : {"nancy", "president", "representative"}) {
    Activity probe{id, {{"explanation", id}}, {}, true, {}};
    EXPECT_EQ(classify(p, probe).verdict, Verdict::OverFactored) << id;
  }
}

TEST(GenerateModel, SeveralExplanationsKeepTheirOwnStructure) {
  auto scenarios = three_scenarios();
  std::vector<OperationalizedExplanation> ops;
  for (const auto& s : scenarios) {
    ops.push_back(cut(generalize(s.tree, political()), FrontierSpec::at_predicates({"aspect"}), s.id));
  }
  auto p = generate_model(political(), ops, {});
  ASSERT_EQ(p.root().arms().size(), 3u);
  for (const auto& arm : p.root().arms()) {
    ASSERT_TRUE(arm.body.is_chain());
    EXPECT_EQ(arm.body.arms().size(), 4u);  // four aspects each
  }
}

TEST(GenerateModel, UnboundSubgoals) {
  auto th = parse_theory("R1: top(x) <= pick(x) & colorselect(x, c).");
  OperationalizedExplanation op{"t", parse_atom("top(x)"), {}, {parse_atom("pick(x)")}};
  op.fixed = CutNode{CutNode::Kind::Rule, parse_atom("top(x)"), "R1", {CutNode{CutNode::Kind::Open, parse_atom("pick(x)"), "", {}}}};
  GenerateOptions strict;
  strict.strict = true;
  EXPECT_EQ(error_of([&] { generate_model(th, {op}, {}, strict); }), ErrorKind::UnboundSubgoal);
  auto p = generate_model(th, {op}, {});
  ASSERT_TRUE(p.root().is_content());
  EXPECT_EQ(p.root().payload(), "incomplete: unbound pick(x)");

  // A selection with a variable value and no declared domain is unbound too.
  op.open_subgoals = {parse_atom("colorselect(x, c)")};
  EXPECT_EQ(error_of([&] { generate_model(th, {op}, {}, strict); }), ErrorKind::UnboundSubgoal);
}

TEST(GenerateModel, IndistinctSelectionAlternativesGetRuleFlags) {
  auto th = parse_theory(R"(
    R1: g(x) <= colorselect(x, "Red").
    R2: g(x) <= colorselect(x, "Red") & sizeselect(x, "Big").
    R3: g(x) <= colorselect(x, "Blue").
  )");
  OperationalizedExplanation op{"t", parse_atom("top(x)"), {CutNode::Kind::Rule, parse_atom("top(x)"), "R0", {}},
                                {parse_atom("g(x)")}};
  auto p = generate_model(th, {op}, {});
  ASSERT_NE(p.group_named("G"), nullptr);
  std::vector<std::string> arms;
  for (const auto& a : p.root().arms()) arms.push_back(a.test.to_string());
  EXPECT_EQ(arms, (std::vector<std::string>{"R1", "R2", "R3"}));

  // Exclusive selection alternatives need no flags.
  auto plain = parse_theory(R"(
    R1: g(x) <= colorselect(x, "Red").
    R2: g(x) <= colorselect(x, "Blue").
  )");
  auto q = generate_model(plain, {op}, {});
  EXPECT_TRUE(q.mutexes().empty());
  EXPECT_EQ(q.root().arms().size(), 2u);
}

TEST(GenerateModel, ContradictoryPathsAreDropped) {
  auto th = parse_theory(R"(
    R1: g(x) <= colorselect(x, c) & h(x).
    R2: h(x) <= colorselect(x, "Red").
    domain colorselect: "Red", "Blue".
  )");
  OperationalizedExplanation op{"t", parse_atom("top(x)"), {CutNode::Kind::Rule, parse_atom("top(x)"), "R0", {}},
                                {parse_atom("g(x)")}};
  auto paths = enumerate_paths(generate_model(th, {op}, {}));
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].tests, (std::vector<LinkTest>{LinkTest("Color", "Red")}));
}

TEST(GenerateModel, RecursionStopsAtTheDepthCap) {
  auto th = parse_theory("R1: r(x) <= r(x).\nR2: r(x) <= pickselect(x, \"A\").");
  OperationalizedExplanation op{"t", parse_atom("top(x)"), {CutNode::Kind::Rule, parse_atom("top(x)"), "R0", {}},
                                {parse_atom("r(x)")}};
  GenerateOptions opts;
  opts.max_depth = 6;
  EXPECT_EQ(error_of([&] { generate_model(th, {op}, {}, opts); }), ErrorKind::DepthExceeded);
}

TEST(GenerateModel, BindingsMustBeReachable) {
  auto op = cut(nancy_general(), FrontierSpec::at_predicates({"member", "aspect"}), "nancy");
  std::vector<ContentBinding> b = {ContentBinding{{{"Member", "Senator"}, {"State", "Texas"}}, "tx", ""}};
  EXPECT_EQ(error_of([&] { generate_model(political(), {op}, b); }), ErrorKind::UnreachableBinding);
  GenerateOptions lax;
  lax.allow_unreachable = true;
  EXPECT_NO_THROW(generate_model(political(), {op}, b, lax));
  std::vector<ContentBinding> twice = {ContentBinding{{}, "a", ""}, ContentBinding{{}, "b", ""}};
  EXPECT_EQ(error_of([&] { generate_model(political(), {op}, twice); }), ErrorKind::InvalidJson);
}

TEST(GenerateModel, BindingsJson) {
  auto b = nancy_bindings();
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0].tuple.at("Member"), "Senator");
  EXPECT_EQ(b[0].payload, "Details about committees");
  auto back = bindings_from_json(json{{"bindings", json::array({to_json(b[1])})}});
  EXPECT_EQ(back.at(0).tuple, b[1].tuple);
  EXPECT_EQ(back.at(0).page, b[1].page);
  EXPECT_EQ(error_of([] { bindings_from_json(json::array({json{{"page", "p"}}})); }), ErrorKind::InvalidJson);
  EXPECT_EQ(error_of([] { bindings_from_json(json{{"page", "p"}}); }), ErrorKind::InvalidJson);
}

TEST(GenerateModel, EveryPathIsPersonableOrComplete) {
  auto p = nancy_model();
  std::mt19937_64 rng(31);
  for (const auto& path : enumerate_paths(p)) {
    auto pairs = as_pairs(path.tests);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    pairs.resize(std::uniform_int_distribution<std::size_t>(0, pairs.size())(rng));
    Activity act{"probe", pairs, {}, true, {}};
    EXPECT_NE(classify(p, act).verdict, Verdict::UnderFactored);
  }
}

// ---------------------------------------------------------------------------
// assess_operationality

TEST(Assess, MiddleFrontierRanksFirst) {
  std::vector<Activity> probes = {
      Activity{"senator-va", {{"Member", "Senator"}, {"State", "VA"}}, {}, true, {}},
      Activity{"education", {{"Aspect", "Education"}}, {}, true, {}},
      Activity{"greenville-rep", {{"Member", "Representative"}, {"District", "Greenville"}}, {}, true, {}},
  };
  std::vector<FrontierSpec> specs = {FrontierSpec::at_root(), FrontierSpec::at_leaves(),
                                     FrontierSpec::at_predicates({"member", "aspect"})};
  auto rows = assess_operationality(political(), {{"nancy", nancy_tree()}}, specs, probes, nancy_bindings());
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].spec, specs[2]);
  EXPECT_DOUBLE_EQ(rows[0].personable_ratio, 1.0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_DOUBLE_EQ(rows[i].personable_ratio, 0.0);
    EXPECT_DOUBLE_EQ(rows[i].complete_only_ratio, 1.0) << rows[i].spec.to_string();
    EXPECT_EQ(rows[i].model_size, 1u);
  }
  auto j = to_json(rows[0]);
  EXPECT_EQ(j["spec"], "preds:aspect,member");
  EXPECT_EQ(j["report"]["personable"], 3);
}

TEST(Assess, SingleSpecSingleRow) {
  auto rows = assess_operationality(political(), {{"nancy", nancy_tree()}}, {FrontierSpec::at_root()},
                                    {Activity{"a", {{"Aspect", "Education"}}, {}, true, {}}});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_DOUBLE_EQ(rows[0].personable_ratio, 0.0);
  EXPECT_EQ(error_of([] { assess_operationality(political(), {}, {}, {}); }), ErrorKind::EmptyMap);
}

TEST(Assess, TiesGoToTheSmallerModel) {
  std::vector<FrontierSpec> specs = {FrontierSpec::at_predicates({"member", "aspect"}),
                                     FrontierSpec::at_predicates({"aspect"})};
  auto rows = assess_operationality(political(), {{"nancy", nancy_tree()}}, specs,
                                    {Activity{"a", {{"Aspect", "!Education"}}, {}, true, {}}});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(rows[0].personable_ratio, rows[1].personable_ratio);
  EXPECT_EQ(rows[0].spec, specs[1]);
  EXPECT_LT(rows[0].model_size, rows[1].model_size);
}
