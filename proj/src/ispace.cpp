#include "pipekit/ispace.hpp"

#include <algorithm>
#include <cctype>

namespace pipekit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::DuplicateArm: return "DuplicateArm";
    case ErrorKind::DuplicateContentRef: return "DuplicateContentRef";
    case ErrorKind::InvalidMutex: return "InvalidMutex";
    case ErrorKind::NonExclusiveArms: return "NonExclusiveArms";
    case ErrorKind::EmptyMap: return "EmptyMap";
    case ErrorKind::LabelCollision: return "LabelCollision";
    case ErrorKind::InvalidJson: return "InvalidJson";
    case ErrorKind::InconsistentAssignment: return "InconsistentAssignment";
    case ErrorKind::EmptyResidual: return "EmptyResidual";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::DepthExceeded: return "DepthExceeded";
    case ErrorKind::MalformedTree: return "MalformedTree";
    case ErrorKind::FrontierMiss: return "FrontierMiss";
    case ErrorKind::UnboundSubgoal: return "UnboundSubgoal";
    case ErrorKind::UnreachableBinding: return "UnreachableBinding";
    case ErrorKind::UnknownModel: return "UnknownModel";
    case ErrorKind::UnknownSession: return "UnknownSession";
    case ErrorKind::NoSuchArm: return "NoSuchArm";
    case ErrorKind::EmptyHistory: return "EmptyHistory";
    case ErrorKind::IoError: return "IoError";
  }
  return "Error";
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = static_cast<unsigned char>(s.front());
  if (!(std::isalpha(head) || head == '_')) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_';
  });
}

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// LinkTest

LinkTest::LinkTest(std::string k, std::string v) : key(std::move(k)), value(std::move(v)) {
  if (!is_identifier(key)) {
    throw Error(ErrorKind::SyntaxError, "test key must be an identifier: '" + key + "'");
  }
  if (value.empty()) {
    throw Error(ErrorKind::SyntaxError, "test value must be non-empty for key " + key);
  }
}

std::string LinkTest::to_string() const {
  if (is_flag()) return key;
  return key + "=" + (is_identifier(value) ? value : quote(value));
}

LinkTest LinkTest::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  auto eq = text.find('=');
  if (eq == std::string_view::npos) return LinkTest(std::string(text));
  auto key = trim(text.substr(0, eq));
  auto value = trim(text.substr(eq + 1));
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
    std::string unq;
    for (std::size_t i = 1; i + 1 < value.size(); ++i) {
      if (value[i] == '\\' && i + 2 < value.size()) ++i;
      unq.push_back(value[i]);
    }
    return LinkTest(std::string(key), unq);
  }
  return LinkTest(std::string(key), std::string(value));
}

// ---------------------------------------------------------------------------
// Node

Node Node::content(std::string ref, std::string payload) {
  if (ref.empty()) throw Error(ErrorKind::SyntaxError, "page reference must be non-empty");
  Node n;
  n.kind_ = Kind::Content;
  n.ref_ = std::move(ref);
  n.payload_ = std::move(payload);
  return n;
}

Node Node::chain(std::vector<Arm> arms) {
  if (arms.empty()) throw Error(ErrorKind::SyntaxError, "chain needs at least one arm");
  for (std::size_t i = 0; i < arms.size(); ++i) {
    for (std::size_t j = i + 1; j < arms.size(); ++j) {
      if (arms[i].test == arms[j].test) {
        throw Error(ErrorKind::DuplicateArm, "test " + arms[i].test.to_string() +
                                                 " appears twice in one chain");
      }
    }
  }
  Node n;
  n.kind_ = Kind::Chain;
  n.arms_ = std::move(arms);
  return n;
}

Node Node::seq(std::vector<Node> children) {
  if (children.empty()) throw Error(ErrorKind::SyntaxError, "block needs at least one statement");
  std::vector<Node> flat;
  for (auto& c : children) {
    if (c.is_seq()) {
      for (auto& g : c.children_) flat.push_back(std::move(g));
    } else {
      flat.push_back(std::move(c));
    }
  }
  if (flat.size() == 1) return std::move(flat.front());
  Node n;
  n.kind_ = Kind::Seq;
  n.children_ = std::move(flat);
  return n;
}

bool operator==(const Node& a, const Node& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Node::Kind::Content: return a.ref_ == b.ref_ && a.payload_ == b.payload_;
    case Node::Kind::Chain: return a.arms_ == b.arms_;
    case Node::Kind::Seq: return a.children_ == b.children_;
  }
  return false;
}

// ---------------------------------------------------------------------------
// MutexGroup / Program

bool MutexGroup::contains(const LinkTest& t) const {
  return std::find(members.begin(), members.end(), t) != members.end();
}

bool operator==(const MutexGroup& a, const MutexGroup& b) {
  if (a.name != b.name) return false;
  std::set<LinkTest> sa(a.members.begin(), a.members.end());
  std::set<LinkTest> sb(b.members.begin(), b.members.end());
  return sa == sb;
}

namespace {

void collect_refs(const Node& n, std::set<std::string>& refs) {
  switch (n.kind()) {
    case Node::Kind::Content:
      if (!refs.insert(n.ref()).second) {
        throw Error(ErrorKind::DuplicateContentRef, "page \"" + n.ref() + "\" appears twice");
      }
      break;
    case Node::Kind::Chain:
      for (const auto& arm : n.arms()) collect_refs(arm.body, refs);
      break;
    case Node::Kind::Seq:
      for (const auto& c : n.children()) collect_refs(c, refs);
      break;
  }
}

void check_exclusive(const Program& p, const Node& n) {
  if (n.is_chain()) {
    const auto& arms = n.arms();
    for (std::size_t i = 0; i < arms.size(); ++i) {
      for (std::size_t j = i + 1; j < arms.size(); ++j) {
        if (!p.exclusive(arms[i].test, arms[j].test)) {
          throw Error(ErrorKind::NonExclusiveArms,
                      "arms " + arms[i].test.to_string() + " and " + arms[j].test.to_string() +
                          " share neither a key nor a mutex group");
        }
      }
    }
    for (const auto& arm : arms) check_exclusive(p, arm.body);
  } else if (n.is_seq()) {
    for (const auto& c : n.children()) check_exclusive(p, c);
  }
}

void collect_tests(const Node& n, std::vector<LinkTest>& out, std::set<LinkTest>& seen) {
  if (n.is_chain()) {
    for (const auto& arm : n.arms()) {
      if (seen.insert(arm.test).second) out.push_back(arm.test);
      collect_tests(arm.body, out, seen);
    }
  } else if (n.is_seq()) {
    for (const auto& c : n.children()) collect_tests(c, out, seen);
  }
}

}  // namespace

Program::Program(std::vector<MutexGroup> mutexes, Node root,
                 std::map<std::string, std::string> meta)
    : mutexes_(std::move(mutexes)), root_(std::move(root)), meta_(std::move(meta)) {
  std::set<std::string> names;
  std::map<LinkTest, std::string> owner;
  for (const auto& g : mutexes_) {
    if (!is_identifier(g.name)) {
      throw Error(ErrorKind::InvalidMutex, "group name must be an identifier: '" + g.name + "'");
    }
    if (!names.insert(g.name).second) {
      throw Error(ErrorKind::InvalidMutex, "group " + g.name + " declared twice");
    }
    std::set<LinkTest> members(g.members.begin(), g.members.end());
    if (members.size() != g.members.size()) {
      throw Error(ErrorKind::InvalidMutex, "group " + g.name + " repeats a member");
    }
    if (members.size() < 2) {
      throw Error(ErrorKind::InvalidMutex, "group " + g.name + " needs at least two members");
    }
    for (const auto& t : members) {
      auto [it, fresh] = owner.emplace(t, g.name);
      if (!fresh) {
        throw Error(ErrorKind::InvalidMutex, "test " + t.to_string() + " is in both " +
                                                 it->second + " and " + g.name);
      }
    }
  }
  std::set<std::string> refs;
  collect_refs(root_, refs);
  check_exclusive(*this, root_);
}

const MutexGroup* Program::group_of(const LinkTest& t) const {
  for (const auto& g : mutexes_) {
    if (g.contains(t)) return &g;
  }
  return nullptr;
}

const MutexGroup* Program::group_named(std::string_view name) const {
  for (const auto& g : mutexes_) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

bool Program::exclusive(const LinkTest& a, const LinkTest& b) const {
  if (a == b) return false;
  if (a.key == b.key) return true;
  const auto* g = group_of(a);
  return g != nullptr && g->contains(b);
}

std::string Program::dimension_of(const LinkTest& t) const {
  if (const auto* g = group_of(t)) return g->name;
  return t.key;
}

std::vector<LinkTest> Program::tests() const {
  std::vector<LinkTest> out;
  std::set<LinkTest> seen;
  collect_tests(root_, out, seen);
  return out;
}

LinkTest Program::resolve(std::string_view key, std::string_view value) const {
  if (value.empty() || value == kFlagValue) return LinkTest(std::string(key));
  if (const auto* g = group_named(key)) {
    for (const auto& m : g->members) {
      if (m.is_flag() && m.key == value) return m;
      if (!m.is_flag() && m.value == value) return m;
    }
  }
  return LinkTest(std::string(key), std::string(value));
}

bool operator==(const Program& a, const Program& b) {
  if (a.root_ != b.root_ || a.meta_ != b.meta_) return false;
  if (a.mutexes_.size() != b.mutexes_.size()) return false;
  for (const auto& g : a.mutexes_) {
    const auto* h = b.group_named(g.name);
    if (h == nullptr || !(*h == g)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Assignment

Assignment& Assignment::choose(const LinkTest& t) {
  auto it = entries_.find(t.key);
  if (it == entries_.end()) {
    entries_.emplace(t.key, Decision{Decision::Kind::Chosen, t.value, {}});
    return *this;
  }
  auto& d = it->second;
  if (d.kind == Decision::Kind::Chosen) {
    if (d.chosen != t.value) {
      throw Error(ErrorKind::InconsistentAssignment,
                  t.key + " is chosen as both " + d.chosen + " and " + t.value);
    }
    return *this;
  }
  if (d.denied.count(t.value) != 0) {
    throw Error(ErrorKind::InconsistentAssignment,
                t.to_string() + " is both chosen and denied");
  }
  d = Decision{Decision::Kind::Chosen, t.value, {}};
  return *this;
}

Assignment& Assignment::deny(const LinkTest& t) {
  auto it = entries_.find(t.key);
  if (it == entries_.end()) {
    entries_.emplace(t.key, Decision{Decision::Kind::Denied, {}, {t.value}});
    return *this;
  }
  auto& d = it->second;
  if (d.kind == Decision::Kind::Chosen) {
    if (d.chosen == t.value) {
      throw Error(ErrorKind::InconsistentAssignment,
                  t.to_string() + " is both chosen and denied");
    }
    return *this;  // already implied by the choice
  }
  d.denied.insert(t.value);
  return *this;
}

Assignment& Assignment::merge(const Assignment& other) {
  for (const auto& [key, d] : other.entries_) {
    if (d.kind == Decision::Kind::Chosen) {
      choose(LinkTest(key, d.chosen));
    } else {
      for (const auto& v : d.denied) deny(LinkTest(key, v));
    }
  }
  return *this;
}

Truth Assignment::decide(const LinkTest& t) const {
  auto it = entries_.find(t.key);
  if (it == entries_.end()) return Truth::Unknown;
  const auto& d = it->second;
  if (d.kind == Decision::Kind::Chosen) return d.chosen == t.value ? Truth::True : Truth::False;
  return d.denied.count(t.value) != 0 ? Truth::False : Truth::Unknown;
}

bool Assignment::decides_key(const std::string& key) const {
  auto it = entries_.find(key);
  return it != entries_.end() && it->second.kind == Decision::Kind::Chosen;
}

std::vector<LinkTest> Assignment::chosen_tests() const {
  std::vector<LinkTest> out;
  for (const auto& [key, d] : entries_) {
    if (d.kind == Decision::Kind::Chosen) out.emplace_back(key, d.chosen);
  }
  return out;
}

std::vector<LinkTest> Assignment::denied_tests() const {
  std::vector<LinkTest> out;
  for (const auto& [key, d] : entries_) {
    if (d.kind == Decision::Kind::Denied) {
      for (const auto& v : d.denied) out.emplace_back(key, v);
    }
  }
  return out;
}

Assignment assignment_from_pairs(const Program& p,
                                 const std::vector<std::pair<std::string, std::string>>& pairs) {
  Assignment a;
  for (const auto& [key, raw] : pairs) {
    std::string_view value = raw;
    bool negate = false;
    if (!value.empty() && value.front() == '!') {
      negate = true;
      value.remove_prefix(1);
    }
    LinkTest t = p.resolve(key, value);
    if (negate) {
      a.deny(t);
    } else {
      a.choose(t);
    }
  }
  return a;
}

Assignment assignment_from_json(const Program& p, const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidJson, "assignment must be a JSON object");
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& [key, v] : j.items()) {
    if (v.is_boolean()) {
      pairs.emplace_back(key, v.get<bool>() ? std::string(kFlagValue) : "!" + std::string(kFlagValue));
    } else if (v.is_string()) {
      pairs.emplace_back(key, v.get<std::string>());
    } else if (v.is_array()) {
      for (const auto& e : v) {
        if (!e.is_string()) throw Error(ErrorKind::InvalidJson, "assignment values must be strings");
        pairs.emplace_back(key, e.get<std::string>());
      }
    } else {
      throw Error(ErrorKind::InvalidJson, "assignment value for " + key + " must be a string");
    }
  }
  return assignment_from_pairs(p, pairs);
}

json to_json(const Assignment& a) {
  json j = json::object();
  for (const auto& [key, d] : a.entries()) {
    if (d.kind == Decision::Kind::Chosen) {
      j[key] = d.chosen;
    } else {
      json denied = json::array();
      for (const auto& v : d.denied) denied.push_back("!" + v);
      j[key] = denied.size() == 1 ? denied.front() : denied;
    }
  }
  return j;
}

// ---------------------------------------------------------------------------
// Paths

namespace {

void walk_paths(const Node& n, std::vector<LinkTest>& prefix, std::vector<Path>& out) {
  switch (n.kind()) {
    case Node::Kind::Content:
      out.push_back(Path{prefix, n.ref()});
      break;
    case Node::Kind::Chain:
      for (const auto& arm : n.arms()) {
        prefix.push_back(arm.test);
        walk_paths(arm.body, prefix, out);
        prefix.pop_back();
      }
      break;
    case Node::Kind::Seq:
      for (const auto& c : n.children()) walk_paths(c, prefix, out);
      break;
  }
}

}  // namespace

std::vector<Path> enumerate_paths(const Program& p) {
  std::vector<Path> out;
  std::vector<LinkTest> prefix;
  walk_paths(p.root(), prefix, out);
  return out;
}

std::size_t node_count(const Node& n) {
  std::size_t count = 1;
  for (const auto& arm : n.arms()) count += node_count(arm.body);
  for (const auto& c : n.children()) count += node_count(c);
  return count;
}

}  // namespace pipekit
