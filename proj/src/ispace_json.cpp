// JSON rendering of programs and sitemap ingestion.
//
// Node JSON:
//   {"chain": [{"test": {"key": K, "value": V}, "body": node}, ...]}
//   {"page":  {"ref": R, "payload": P}}
//   {"seq":   [node, ...]}

#include <algorithm>
#include <functional>

#include "pipekit/ispace.hpp"

namespace pipekit {
namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::InvalidJson, msg); }

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) bad(std::string("missing field '") + name + "'");
  return j.at(name);
}

std::string str_field(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_string()) bad(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

LinkTest test_from_json(const json& j) {
  if (j.is_string()) return LinkTest::parse(j.get<std::string>());
  std::string value(kFlagValue);
  if (j.contains("value")) {
    if (!j.at("value").is_string()) bad("test value must be a string");
    value = j.at("value").get<std::string>();
  }
  return LinkTest(str_field(j, "key"), value);
}

Node node_from_json(const json& j) {
  if (!j.is_object()) bad("node must be an object");
  if (j.contains("chain")) {
    const auto& arms_j = j.at("chain");
    if (!arms_j.is_array()) bad("chain must be an array");
    std::vector<Arm> arms;
    for (const auto& a : arms_j) {
      arms.push_back(Arm{test_from_json(field(a, "test")), node_from_json(field(a, "body"))});
    }
    return Node::chain(std::move(arms));
  }
  if (j.contains("page")) {
    const auto& pg = j.at("page");
    std::string payload;
    if (pg.contains("payload")) payload = str_field(pg, "payload");
    return Node::content(str_field(pg, "ref"), payload);
  }
  if (j.contains("seq")) {
    const auto& cs = j.at("seq");
    if (!cs.is_array()) bad("seq must be an array");
    std::vector<Node> children;
    for (const auto& c : cs) children.push_back(node_from_json(c));
    return Node::seq(std::move(children));
  }
  bad("node must have one of 'chain', 'page', 'seq'");
}

}  // namespace

json to_json(const LinkTest& t) { return json{{"key", t.key}, {"value", t.value}}; }

json to_json(const Node& n) {
  switch (n.kind()) {
    case Node::Kind::Content:
      return json{{"page", {{"ref", n.ref()}, {"payload", n.payload()}}}};
    case Node::Kind::Chain: {
      json arms = json::array();
      for (const auto& arm : n.arms()) {
        arms.push_back(json{{"test", to_json(arm.test)}, {"body", to_json(arm.body)}});
      }
      return json{{"chain", arms}};
    }
    case Node::Kind::Seq: {
      json cs = json::array();
      for (const auto& c : n.children()) cs.push_back(to_json(c));
      return json{{"seq", cs}};
    }
  }
  return {};
}

json to_json(const Program& p) {
  std::vector<const MutexGroup*> groups;
  for (const auto& g : p.mutexes()) groups.push_back(&g);
  std::sort(groups.begin(), groups.end(),
            [](const MutexGroup* a, const MutexGroup* b) { return a->name < b->name; });
  json mj = json::array();
  for (const auto* g : groups) {
    json members = json::array();
    for (const auto& t : g->members) members.push_back(to_json(t));
    mj.push_back(json{{"name", g->name}, {"members", members}});
  }
  json meta = json::object();
  for (const auto& [k, v] : p.meta()) meta[k] = v;
  return json{{"mutexes", mj}, {"meta", meta}, {"root", to_json(p.root())}};
}

Program program_from_json(const json& j) {
  std::vector<MutexGroup> groups;
  if (j.contains("mutexes")) {
    for (const auto& g : j.at("mutexes")) {
      MutexGroup mg;
      mg.name = str_field(g, "name");
      for (const auto& m : field(g, "members")) mg.members.push_back(test_from_json(m));
      groups.push_back(std::move(mg));
    }
  }
  std::map<std::string, std::string> meta;
  if (j.contains("meta")) {
    for (const auto& [k, v] : j.at("meta").items()) {
      if (!v.is_string()) bad("meta values must be strings");
      meta[k] = v.get<std::string>();
    }
  }
  return Program(std::move(groups), node_from_json(field(j, "root")), std::move(meta));
}

// ---------------------------------------------------------------------------
// Sitemap ingestion

namespace {

struct Ingest {
  // facet name -> members in first-seen order
  std::map<std::string, std::vector<LinkTest>> facets;
  std::vector<std::string> facet_order;
  // anonymous sibling sets of flags, merged later
  std::vector<std::vector<LinkTest>> anonymous;

  void note_facet(const std::string& name, const std::vector<LinkTest>& members) {
    auto [it, fresh] = facets.emplace(name, std::vector<LinkTest>{});
    if (fresh) facet_order.push_back(name);
    for (const auto& t : members) {
      if (std::find(it->second.begin(), it->second.end(), t) == it->second.end()) {
        it->second.push_back(t);
      }
    }
  }

  Node build(const json& node, bool is_root) {
    if (!node.is_object()) bad("sitemap node must be an object");
    if (node.contains("page")) {
      if (node.contains("children")) bad("sitemap node has both 'page' and 'children'");
      std::string payload;
      if (node.contains("payload")) payload = str_field(node, "payload");
      return Node::content(str_field(node, "page"), payload);
    }
    if (!node.contains("children") || !node.at("children").is_array() ||
        node.at("children").empty()) {
      if (is_root) throw Error(ErrorKind::EmptyMap, "sitemap has no pages");
      bad("sitemap node '" + (node.contains("label") ? node.at("label").dump() : "?") +
          "' has neither page nor children");
    }
    std::vector<Arm> arms;
    std::vector<LinkTest> flags;
    for (const auto& child : node.at("children")) {
      LinkTest t = LinkTest::parse(str_field(child, "label"));
      for (const auto& a : arms) {
        if (a.test == t) {
          throw Error(ErrorKind::LabelCollision,
                      "two siblings are labelled '" + t.to_string() + "'");
        }
      }
      if (t.is_flag()) flags.push_back(t);
      arms.push_back(Arm{t, build(child, false)});
    }
    if (node.contains("facet")) {
      std::vector<LinkTest> members;
      for (const auto& a : arms) members.push_back(a.test);
      note_facet(str_field(node, "facet"), members);
    } else if (flags.size() >= 2) {
      anonymous.push_back(flags);
    }
    return Node::chain(std::move(arms));
  }

  std::vector<MutexGroup> groups() {
    std::vector<MutexGroup> out;
    std::set<LinkTest> named;
    for (const auto& name : facet_order) {
      const auto& members = facets.at(name);
      for (const auto& m : members) named.insert(m);
      if (members.size() >= 2) out.push_back(MutexGroup{name, members});
    }
    // Merge overlapping anonymous sibling sets; name each after its members.
    std::vector<std::vector<LinkTest>> merged;
    for (auto set : anonymous) {
      std::erase_if(set, [&](const LinkTest& t) { return named.count(t) != 0; });
      if (set.size() < 2) continue;
      bool joined = false;
      for (auto& m : merged) {
        bool overlap = std::any_of(set.begin(), set.end(), [&](const LinkTest& t) {
          return std::find(m.begin(), m.end(), t) != m.end();
        });
        if (overlap) {
          for (const auto& t : set) {
            if (std::find(m.begin(), m.end(), t) == m.end()) m.push_back(t);
          }
          joined = true;
          break;
        }
      }
      if (!joined) merged.push_back(set);
    }
    for (const auto& m : merged) {
      std::vector<std::string> keys;
      for (const auto& t : m) keys.push_back(t.key);
      std::sort(keys.begin(), keys.end());
      std::string name;
      for (const auto& k : keys) name += (name.empty() ? "" : "_") + k;
      out.push_back(MutexGroup{name, m});
    }
    return out;
  }
};

}  // namespace

Program ingest_sitemap(const json& map) {
  if (map.is_null() || (map.is_object() && map.empty())) {
    throw Error(ErrorKind::EmptyMap, "sitemap is empty");
  }
  Ingest ing;
  Node root = ing.build(map, /*is_root=*/true);
  return Program(ing.groups(), std::move(root));
}

}  // namespace pipekit
