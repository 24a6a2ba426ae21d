#include <gtest/gtest.h>

#include <functional>

#include "generators.hpp"
#include "pipekit/specializer.hpp"
#include "test_support.hpp"

using namespace pipekit;
using pipekit::testing::congress;
using pipekit::testing::congress_dem;

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

Assignment chosen(std::initializer_list<const char*> flags) {
  Assignment a;
  for (const char* f : flags) a.choose(LinkTest(f));
  return a;
}

// Every assignment over the six congress flags: each undecided, chosen or denied.
std::vector<Assignment> all_congress_assignments() {
  const char* keys[] = {"Sen", "Repr", "Dem", "Rep", "CA", "NY"};
  std::vector<Assignment> out;
  for (int code = 0; code < 729; ++code) {
    Assignment a;
    int c = code;
    for (const char* k : keys) {
      int d = c % 3;
      c /= 3;
      if (d == 1) a.choose(LinkTest(k));
      if (d == 2) a.deny(LinkTest(k));
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace

TEST(PropagateMutex, ChosenDemDeniesRep) {
  Assignment out = propagate_mutex(congress(), chosen({"Dem"}));
  EXPECT_EQ(out.decide(LinkTest("Dem")), Truth::True);
  EXPECT_EQ(out.decide(LinkTest("Rep")), Truth::False);
  EXPECT_EQ(out.size(), 2u);
  EXPECT_EQ(out.decide(LinkTest("Sen")), Truth::Unknown);
}

TEST(PropagateMutex, EmptyStaysEmpty) {
  EXPECT_TRUE(propagate_mutex(congress(), Assignment{}).empty());
}

TEST(PropagateMutex, TwoChosenMembersConflict) {
  EXPECT_EQ(error_of([] { propagate_mutex(congress(), chosen({"Dem", "Rep"})); }),
            ErrorKind::InconsistentAssignment);
}

TEST(Specialize, DemGivesGoldenResidual) {
  auto r = specialize(congress(), chosen({"Dem"}));
  EXPECT_EQ(r.residual, congress_dem()) << serialize(r.residual);
  EXPECT_EQ(r.hoisted_chains, 2u);
  EXPECT_EQ(r.dropped_arms, 2u);
  for (const auto& t : r.residual.tests()) {
    EXPECT_NE(t, LinkTest("Dem"));
    EXPECT_NE(t, LinkTest("Rep"));
  }
  EXPECT_FALSE(is_complete(r.residual));
  EXPECT_EQ(r.applied.decide(LinkTest("Rep")), Truth::False);
}

TEST(Specialize, EmptyAssignmentIsIdentity) {
  Program p = congress();
  auto r = specialize(p, Assignment{});
  EXPECT_EQ(r.residual, p);
  EXPECT_EQ(r.dropped_arms, 0u);
  EXPECT_EQ(r.hoisted_chains, 0u);
}

TEST(Specialize, FullInputLeavesOnePage) {
  Program p = congress();
  Assignment a = chosen({"Sen", "Dem", "CA"});
  auto oracle = pipekit::testing::oracle_filter_paths(p, a);
  ASSERT_EQ(oracle.size(), 1u);
  EXPECT_TRUE(oracle[0].tests.empty());
  auto r = specialize(p, a);
  ASSERT_TRUE(r.residual.root().is_content());
  EXPECT_EQ(r.residual.root().ref(), oracle[0].ref);
  EXPECT_EQ(r.residual.root().ref(), "sen-dem-ca");
  EXPECT_TRUE(is_complete(r.residual));
}

TEST(Specialize, DenialsDropArmsAndKeepSingleArmChains) {
  Assignment a;
  a.deny(LinkTest("Rep"));
  auto r = specialize(congress(), a);
  const Node& party = r.residual.root().arms()[0].body;
  ASSERT_TRUE(party.is_chain());
  ASSERT_EQ(party.arms().size(), 1u);
  EXPECT_EQ(party.arms()[0].test, LinkTest("Dem"));
  EXPECT_EQ(r.dropped_arms, 2u);
}

TEST(Specialize, RulingOutEverythingIsAnError) {
  Assignment a;
  a.deny(LinkTest("Sen")).deny(LinkTest("Repr"));
  EXPECT_EQ(error_of([&] { specialize(congress(), a); }), ErrorKind::EmptyResidual);
}

TEST(Specialize, SeqDropsEmptiedChildren) {
  Program p = parse_program(R"(
    page "header";
    if (K = a) { page "a"; } else if (K = b) { page "b"; }
  )");
  Assignment a;
  a.deny(LinkTest("K", "a")).deny(LinkTest("K", "b"));
  auto r = specialize(p, a);
  ASSERT_TRUE(r.residual.root().is_content());
  EXPECT_EQ(r.residual.root().ref(), "header");
}

TEST(Specialize, KeyValueChoiceRulesOutOtherValues) {
  Program p = parse_program(R"(
    if (State = CA) { page "ca"; } else if (State = NY) { page "ny"; }
  )");
  Assignment a;
  a.choose(LinkTest("State", "NY"));
  auto r = specialize(p, a);
  ASSERT_TRUE(r.residual.root().is_content());
  EXPECT_EQ(r.residual.root().ref(), "ny");
}

TEST(Specialize, ResidualKeepsHeaders) {
  Program p = parse_program(R"(
    mutex Party { Dem, Rep }
    meta title "Congress";
    if (Dem) { page "d"; } else if (Rep) { page "r"; }
  )");
  auto r = specialize(p, chosen({"Dem"}));
  EXPECT_EQ(r.residual.mutexes(), p.mutexes());
  EXPECT_EQ(r.residual.meta(), p.meta());
  EXPECT_EQ(parse_program(serialize(r.residual)), r.residual);
}

TEST(IsComplete, ContentOnlyProgram) {
  EXPECT_TRUE(is_complete(parse_program(R"(page "a"; page "b";)")));
  EXPECT_FALSE(is_complete(congress()));
  EXPECT_FALSE(is_complete(congress_dem()));
}

TEST(SpecializesTo, CongressToDemResidualIsDem) {
  auto w = specializes_to(congress(), congress_dem());
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(*w, chosen({"Dem"}));
}

TEST(SpecializesTo, ReflexiveWithEmptyWitness) {
  auto w = specializes_to(congress(), congress());
  ASSERT_TRUE(w.has_value());
  EXPECT_TRUE(w->empty());
}

TEST(SpecializesTo, ResidualDoesNotSpecializeBack) {
  Program left = congress();
  Program right = congress_dem();
  EXPECT_FALSE(specializes_to(right, left).has_value());
  // Exhaustive check over every assignment of the six keys.
  for (const auto& a : all_congress_assignments()) {
    try {
      EXPECT_FALSE(specialize(right, a).residual == left);
    } catch (const Error&) {
    }
  }
}

TEST(SpecializesTo, WitnessAgreesWithExhaustiveSearch) {
  Program p = congress();
  auto all = all_congress_assignments();
  for (const char* target : {"Sen", "Repr", "CA", "NY", "Rep"}) {
    Program q = specialize(p, chosen({target})).residual;
    auto w = specializes_to(p, q);
    ASSERT_TRUE(w.has_value()) << target;
    EXPECT_EQ(specialize(p, *w).residual, q);
    std::size_t smallest = 99;
    for (const auto& a : all) {
      try {
        if (specialize(p, a).residual == q) smallest = std::min(smallest, a.size());
      } catch (const Error&) {
      }
    }
    EXPECT_EQ(w->size(), smallest) << target;
  }
}

TEST(SpecializesTo, BudgetExceededIsDistinctFromAbsent) {
  Program general = parse_program(R"(
    if (A = a1) { page "a"; } else if (A = a2) { page "b"; } else if (A = a3) { page "c"; }
    if (B = b1) { page "d"; } else if (B = b2) { page "e"; } else if (B = b3) { page "f"; }
    if (C = c1) { page "g"; } else if (C = c2) { page "h"; } else if (C = c3) { page "i"; }
  )");
  Program unrelated = parse_program(R"(page "zzz";)");
  EXPECT_EQ(error_of([&] { specializes_to(general, unrelated, SearchBudget{5}); }),
            ErrorKind::BudgetExceeded);
  EXPECT_FALSE(specializes_to(general, unrelated).has_value());
}

TEST(Composition, ExhaustiveOverCongressAssignments) {
  Program p = congress();
  const char* keys[] = {"Sen", "Repr", "Dem", "Rep", "CA", "NY"};
  std::size_t checked = 0;
  // Each key: untouched, chosen in a, denied in a, chosen in b, denied in b.
  for (int code = 0; code < 15625; ++code) {
    Assignment a, b;
    int c = code;
    for (const char* k : keys) {
      int d = c % 5;
      c /= 5;
      if (d == 1) a.choose(LinkTest(k));
      if (d == 2) a.deny(LinkTest(k));
      if (d == 3) b.choose(LinkTest(k));
      if (d == 4) b.deny(LinkTest(k));
    }
    Assignment both = a;
    both.merge(b);
    std::optional<Program> single;
    ErrorKind single_err = ErrorKind::IoError;
    try {
      single = specialize(p, both).residual;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InconsistentAssignment) continue;
      single_err = e.kind();
    }
    std::optional<Program> stepped;
    ErrorKind stepped_err = ErrorKind::IoError;
    try {
      stepped = specialize(specialize(p, a).residual, b).residual;
    } catch (const Error& e) {
      stepped_err = e.kind();
    }
    ASSERT_EQ(single.has_value(), stepped.has_value()) << code;
    if (single) {
      EXPECT_EQ(*single, *stepped) << code;
    } else {
      EXPECT_EQ(single_err, stepped_err) << code;
    }
    ++checked;
  }
  EXPECT_GT(checked, 5000u);
}

TEST(Order, TransitiveOnCongressFamily) {
  Program p = congress();
  std::vector<Program> family;
  const char* branch[] = {nullptr, "Sen", "Repr"};
  const char* party[] = {nullptr, "Dem", "Rep"};
  const char* state[] = {nullptr, "CA", "NY"};
  for (auto* b : branch) {
    for (auto* pa : party) {
      for (auto* s : state) {
        Assignment a;
        for (auto* f : {b, pa, s}) {
          if (f != nullptr) a.choose(LinkTest(f));
        }
        family.push_back(specialize(p, a).residual);
      }
    }
  }
  std::size_t n = family.size();
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      auto w = specializes_to(family[i], family[j]);
      rel[i][j] = w.has_value();
      if (w) {
        EXPECT_EQ(specialize(family[i], *w).residual, family[j]);
      }
    }
    EXPECT_TRUE(rel[i][i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (rel[i][j] && rel[j][k]) {
          EXPECT_TRUE(rel[i][k]) << i << " " << j << " " << k;
        }
      }
    }
  }
  EXPECT_TRUE(rel[0][n - 1]);
  EXPECT_FALSE(rel[n - 1][0]);
}
