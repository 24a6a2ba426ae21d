// specializer.hpp
//
// Partial evaluation of information-space programs against partial input,
// and the specialization order between programs.

#pragma once

#include <cstddef>
#include <optional>

#include "pipekit/ispace.hpp"

namespace pipekit {

struct SpecializationResult {
  Program residual;
  Assignment applied;  // input plus mutex-forced denials
  std::size_t dropped_arms = 0;
  std::size_t hoisted_chains = 0;
};

/// Adds a denial for every declared-group sibling of each chosen test.
/// Throws InconsistentAssignment when two members of one group are chosen.
Assignment propagate_mutex(const Program& p, const Assignment& a);

/// Chosen arms replace their chain with their (specialized) body, denied arms
/// are dropped, undecided arms are kept. Chains left without arms vanish.
/// Throws EmptyResidual when the input rules out every page.
SpecializationResult specialize(const Program& p, const Assignment& a);

/// True iff the program has no chains left.
bool is_complete(const Program& p);

/// Search bound for specializes_to: the number of candidate assignments tried.
struct SearchBudget {
  std::size_t max_candidates = 100000;
};

/// Smallest assignment (over keys present in `general` but not in `specific`)
/// that specializes `general` into `specific`; nullopt when none exists.
/// Throws BudgetExceeded when the budget runs out before the space is
/// exhausted.
std::optional<Assignment> specializes_to(const Program& general, const Program& specific,
                                         SearchBudget budget = {});

}  // namespace pipekit
