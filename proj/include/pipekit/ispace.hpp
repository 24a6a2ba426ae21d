// ispace.hpp
//
// Programmatic representation of an information space: nested conditional
// chains over link tests, with pages at the leaves. Values are immutable once
// built; every factory validates its invariants and throws pipekit::Error.

#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pipekit/error.hpp"

namespace pipekit {

using json = nlohmann::json;

inline constexpr std::string_view kFlagValue = "true";

bool is_identifier(std::string_view s);

/// A link test. Bare flags (`Dem`) are stored as `Dem=true`.
struct LinkTest {
  std::string key;
  std::string value{kFlagValue};

  LinkTest() = default;
  LinkTest(std::string k, std::string v = std::string(kFlagValue));

  bool is_flag() const { return value == kFlagValue; }

  /// Surface form: `Dem`, `Party=Dem`, `State="North Carolina"`.
  std::string to_string() const;

  /// Parses the surface form produced by to_string().
  static LinkTest parse(std::string_view text);

  friend auto operator<=>(const LinkTest&, const LinkTest&) = default;
  friend bool operator==(const LinkTest&, const LinkTest&) = default;
};

struct Arm;

/// One node of the program tree. A Chain is an if / else-if dichotomy, a Seq
/// is a block with several statements, Content is a page.
class Node {
 public:
  enum class Kind { Chain, Content, Seq };

  static Node content(std::string ref, std::string payload = {});
  /// Throws DuplicateArm when two arms carry the same test.
  static Node chain(std::vector<Arm> arms);
  /// Flattens nested Seqs; a single child collapses to that child.
  static Node seq(std::vector<Node> children);

  Kind kind() const { return kind_; }
  bool is_chain() const { return kind_ == Kind::Chain; }
  bool is_content() const { return kind_ == Kind::Content; }
  bool is_seq() const { return kind_ == Kind::Seq; }

  const std::vector<Arm>& arms() const { return arms_; }
  const std::vector<Node>& children() const { return children_; }
  const std::string& ref() const { return ref_; }
  const std::string& payload() const { return payload_; }

  friend bool operator==(const Node& a, const Node& b);

 private:
  Node() = default;

  Kind kind_ = Kind::Content;
  std::vector<Arm> arms_;
  std::vector<Node> children_;
  std::string ref_;
  std::string payload_;
};

struct Arm {
  LinkTest test;
  Node body;

  friend bool operator==(const Arm&, const Arm&) = default;
};

struct MutexGroup {
  std::string name;
  std::vector<LinkTest> members;

  bool contains(const LinkTest& t) const;
};

/// Equality ignores header order and member order.
bool operator==(const MutexGroup& a, const MutexGroup& b);

class Program {
 public:
  /// Validates: distinct arms, unique content refs, well-formed mutex groups,
  /// and pairwise-exclusive arms within every chain.
  Program(std::vector<MutexGroup> mutexes, Node root,
          std::map<std::string, std::string> meta = {});

  const std::vector<MutexGroup>& mutexes() const { return mutexes_; }
  const Node& root() const { return root_; }
  const std::map<std::string, std::string>& meta() const { return meta_; }

  /// Declared group holding `t`, if any.
  const MutexGroup* group_of(const LinkTest& t) const;
  const MutexGroup* group_named(std::string_view name) const;

  /// True when the two tests can never hold together: same key with
  /// different values, or members of one declared group.
  bool exclusive(const LinkTest& a, const LinkTest& b) const;

  /// Facet a test belongs to: its declared group name, else its key.
  std::string dimension_of(const LinkTest& t) const;

  /// Every distinct test occurring in the tree, in first-occurrence order.
  std::vector<LinkTest> tests() const;

  /// Reads a user-facing `key=value` pair against this program. A key that
  /// names a declared group and a value naming a flag member resolves to that
  /// flag (`Party=Dem` -> `Dem`); anything else is taken literally.
  LinkTest resolve(std::string_view key, std::string_view value) const;

  friend bool operator==(const Program& a, const Program& b);

 private:
  std::vector<MutexGroup> mutexes_;
  Node root_;
  std::map<std::string, std::string> meta_;
};

/// Per-key decision of an Assignment.
struct Decision {
  enum class Kind { Chosen, Denied };
  Kind kind = Kind::Chosen;
  std::string chosen;
  std::set<std::string> denied;

  friend bool operator==(const Decision&, const Decision&) = default;
};

enum class Truth { True, False, Unknown };

/// Partial input: per key, either one chosen value or a set of denied values.
/// choose()/deny() keep the map in normal form and throw
/// InconsistentAssignment on contradiction.
class Assignment {
 public:
  Assignment() = default;

  Assignment& choose(const LinkTest& t);
  Assignment& deny(const LinkTest& t);
  /// Union; throws InconsistentAssignment on conflict.
  Assignment& merge(const Assignment& other);

  Truth decide(const LinkTest& t) const;
  bool decides_key(const std::string& key) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, Decision>& entries() const { return entries_; }

  /// Literal tests chosen or denied, in key order.
  std::vector<LinkTest> chosen_tests() const;
  std::vector<LinkTest> denied_tests() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::map<std::string, Decision> entries_;
};

/// Resolves a `{key: value | "!value"}` map against a program.
Assignment assignment_from_pairs(
    const Program& p,
    const std::vector<std::pair<std::string, std::string>>& pairs);
Assignment assignment_from_json(const Program& p, const json& j);
json to_json(const Assignment& a);

struct Path {
  std::vector<LinkTest> tests;
  std::string ref;

  friend auto operator<=>(const Path&, const Path&) = default;
  friend bool operator==(const Path&, const Path&) = default;
};

Program parse_program(std::string_view text);
std::string serialize(const Program& p);

json to_json(const Program& p);
json to_json(const Node& n);
json to_json(const LinkTest& t);
Program program_from_json(const json& j);

/// Builds a program from a sitemap tree of `{label, children | page}` nodes.
/// The root label names the site; every other label becomes a test.
Program ingest_sitemap(const json& map);

/// One entry per root-to-page path, in tree order.
std::vector<Path> enumerate_paths(const Program& p);

std::size_t node_count(const Node& n);

}  // namespace pipekit
