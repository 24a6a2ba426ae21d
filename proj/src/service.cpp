// In-memory model registry and browsing sessions.

#include "pipekit/service.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "pipekit/specializer.hpp"

namespace pipekit {

std::string_view to_string(HistoryEntry::Action a) {
  return a == HistoryEntry::Action::Browse ? "browse" : "input";
}

namespace {

std::string label(const Assignment& a) {
  std::string out;
  auto add = [&](const std::string& s) {
    if (!out.empty()) out += ", ";
    out += s;
  };
  for (const auto& t : a.chosen_tests()) add(t.to_string());
  for (const auto& t : a.denied_tests()) add("!" + t.to_string());
  return out;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

json to_json(const HistoryEntry& e) {
  return json{{"action", to_string(e.action)}, {"delta", to_json(e.delta)}, {"label", label(e.delta)}};
}

bool View::same_state(const View& other) const {
  return residual == other.residual && available == other.available && complete == other.complete &&
         assignment == other.assignment;
}

json to_json(const View& v) {
  json available = json::array();
  for (const auto& t : v.available) available.push_back(t.to_string());
  json crumbs = json::array();
  for (const auto& e : v.breadcrumb) crumbs.push_back(to_json(e));
  json j{{"session", v.session},
         {"model", v.model},
         {"residual", to_json(v.residual)},
         {"dsl", serialize(v.residual)},
         {"available", available},
         {"complete", v.complete},
         {"assignment", to_json(v.assignment)},
         {"breadcrumb", crumbs}};
  if (v.residual.root().is_content()) {
    j["page"] = json{{"ref", v.residual.root().ref()}, {"payload", v.residual.root().payload()}};
  }
  return j;
}

std::vector<LinkTest> available_tests(const Program& p) {
  std::vector<LinkTest> out;
  auto take = [&](const Node& chain) {
    for (const auto& arm : chain.arms()) {
      if (std::find(out.begin(), out.end(), arm.test) == out.end()) out.push_back(arm.test);
    }
  };
  const Node& root = p.root();
  if (root.is_chain()) take(root);
  if (root.is_seq()) {
    for (const auto& c : root.children()) {
      if (c.is_chain()) take(c);
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_input_text(std::string_view text) {
  std::vector<std::string> items;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '"' && (i == 0 || text[i - 1] != '\\')) quoted = !quoted;
    if (c == ',' && !quoted) {
      items.push_back(cur);
      cur.clear();
      continue;
    }
    cur.push_back(c);
  }
  items.push_back(cur);

  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& raw : items) {
    std::string item = trim(raw);
    if (item.empty()) continue;
    bool negate = item.front() == '!';
    if (negate) item = trim(item.substr(1));
    LinkTest t = LinkTest::parse(item);
    out.emplace_back(t.key, negate ? "!" + t.value : t.value);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Models

std::string Service::upload_model(std::string_view dsl, std::string id) {
  Program p = parse_program(dsl);
  std::unique_lock lock(models_mu_);
  if (id.empty()) {
    do {
      id = "model-" + std::to_string(next_model_++);
    } while (models_.count(id) != 0);
  }
  if (id.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-.") != std::string::npos) {
    throw Error(ErrorKind::SyntaxError, "model id may use letters, digits, '_', '-' and '.' only: '" + id + "'");
  }
  if (models_.count(id) != 0) throw Error(ErrorKind::DuplicateId, "model " + id + " already exists");
  models_.emplace(id, std::make_shared<const Program>(std::move(p)));
  sources_.emplace(id, std::string(dsl));
  return id;
}

std::string Service::add_model(Program p, std::string id) { return upload_model(serialize(p), std::move(id)); }

std::vector<std::string> Service::load_models_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorKind::IoError, "not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ispace") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<std::string> ids;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::ostringstream text;
    text << in.rdbuf();
    try {
      ids.push_back(upload_model(text.str(), f.stem().string()));
    } catch (const Error& e) {
      throw Error(e.kind(), f.string() + ": " + e.what());
    }
  }
  return ids;
}

std::vector<std::string> Service::list_models() const {
  std::shared_lock lock(models_mu_);
  std::vector<std::string> out;
  for (const auto& [id, p] : models_) out.push_back(id);
  return out;
}

std::shared_ptr<const Program> Service::model(const std::string& id) const {
  std::shared_lock lock(models_mu_);
  auto it = models_.find(id);
  if (it == models_.end()) throw Error(ErrorKind::UnknownModel, "no model " + id);
  return it->second;
}

// ---------------------------------------------------------------------------
// Sessions

std::string Service::fresh_token() const {
  static thread_local std::mt19937_64 rng{std::random_device{}() ^
                                          (static_cast<std::uint64_t>(std::random_device{}()) << 32)};
  std::ostringstream out;
  out << std::hex;
  for (int i = 0; i < 2; ++i) {
    std::uint64_t r = rng();
    for (int b = 0; b < 16; ++b) out << ((r >> (60 - 4 * b)) & 0xf);
  }
  return out.str();
}

std::shared_ptr<Service::Session> Service::find(const std::string& id) const {
  std::shared_lock lock(sessions_mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorKind::UnknownSession, "no session " + id);
  return it->second;
}

View Service::make_view(const Session& s) {
  View v{s.id, s.model_id, s.current, available_tests(s.current), is_complete(s.current), s.applied, s.history};
  return v;
}

void Service::recompute(Session& s) {
  Assignment acc;
  for (const auto& e : s.history) acc.merge(e.delta);
  auto r = specialize(*s.model, acc);
  s.accumulated = std::move(acc);
  s.applied = std::move(r.applied);
  s.current = std::move(r.residual);
}

View Service::create_session(const std::string& model_id) {
  auto m = model(model_id);
  auto s = std::make_shared<Session>(model_id, m);
  std::unique_lock lock(sessions_mu_);
  do {
    s->id = fresh_token();
  } while (sessions_.count(s->id) != 0);
  sessions_.emplace(s->id, s);
  return make_view(*s);
}

View Service::view(const std::string& session) const {
  auto s = find(session);
  std::lock_guard lock(s->mu);
  return make_view(*s);
}

View Service::push(Session& s, HistoryEntry entry) {
  if (entry.delta.empty()) return make_view(s);
  Assignment tentative = s.accumulated;
  tentative.merge(entry.delta);
  auto r = specialize(*s.model, tentative);  // throws before anything changes
  s.history.push_back(std::move(entry));
  s.accumulated = std::move(tentative);
  s.applied = std::move(r.applied);
  s.current = std::move(r.residual);
  return make_view(s);
}

View Service::apply_input(const std::string& session, const Assignment& delta) {
  auto s = find(session);
  std::lock_guard lock(s->mu);
  return push(*s, HistoryEntry{HistoryEntry::Action::Input, delta});
}

View Service::apply_input(const std::string& session,
                          const std::vector<std::pair<std::string, std::string>>& pairs) {
  auto s = find(session);
  std::lock_guard lock(s->mu);
  return push(*s, HistoryEntry{HistoryEntry::Action::Input, assignment_from_pairs(*s->model, pairs)});
}

View Service::browse(const std::string& session, const LinkTest& test) {
  auto s = find(session);
  std::lock_guard lock(s->mu);
  auto offered = available_tests(s->current);
  if (std::find(offered.begin(), offered.end(), test) == offered.end()) {
    throw Error(ErrorKind::NoSuchArm, test.to_string() + " is not offered at this point");
  }
  Assignment delta;
  delta.choose(test);
  return push(*s, HistoryEntry{HistoryEntry::Action::Browse, std::move(delta)});
}

View Service::undo(const std::string& session) {
  auto s = find(session);
  std::lock_guard lock(s->mu);
  if (s->history.empty()) throw Error(ErrorKind::EmptyHistory, "nothing to undo");
  s->history.pop_back();
  recompute(*s);
  return make_view(*s);
}

View Service::reset(const std::string& session) {
  auto s = find(session);
  std::lock_guard lock(s->mu);
  s->history.clear();
  recompute(*s);
  return make_view(*s);
}

std::vector<std::string> Service::list_sessions() const {
  std::shared_lock lock(sessions_mu_);
  std::vector<std::string> out;
  for (const auto& [id, s] : sessions_) out.push_back(id);
  return out;
}

// ---------------------------------------------------------------------------
// Snapshots

json Service::snapshot() const {
  json models = json::object();
  {
    std::shared_lock lock(models_mu_);
    for (const auto& [id, dsl] : sources_) models[id] = dsl;
  }
  json sessions = json::array();
  std::shared_lock lock(sessions_mu_);
  for (const auto& [id, s] : sessions_) {
    std::lock_guard slock(s->mu);
    json history = json::array();
    for (const auto& e : s->history) history.push_back(json{{"action", to_string(e.action)}, {"delta", to_json(e.delta)}});
    sessions.push_back(json{{"id", id}, {"model", s->model_id}, {"history", history}});
  }
  return json{{"models", models}, {"sessions", sessions}};
}

void Service::restore(const json& snap) {
  try {
    auto known = list_models();
    const json models = snap.value("models", json::object());
    for (const auto& [id, dsl] : models.items()) {
      if (std::find(known.begin(), known.end(), id) == known.end()) upload_model(dsl.get<std::string>(), id);
    }
    const json sessions = snap.value("sessions", json::array());
    for (const auto& js : sessions) {
      auto m = model(js.at("model").get<std::string>());
      auto s = std::make_shared<Session>(js.at("model").get<std::string>(), m);
      s->id = js.at("id").get<std::string>();
      for (const auto& je : js.at("history")) {
        HistoryEntry e;
        e.action = je.at("action") == "browse" ? HistoryEntry::Action::Browse : HistoryEntry::Action::Input;
        e.delta = assignment_from_json(*m, je.at("delta"));
        s->history.push_back(std::move(e));
      }
      recompute(*s);
      std::unique_lock lock(sessions_mu_);
      sessions_[s->id] = s;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidJson, std::string("snapshot: ") + e.what());
  }
}

void Service::save_snapshot(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << snapshot().dump(2) << "\n";
}

void Service::load_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) return;
  json snap;
  try {
    snap = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidJson, path + ": " + e.what());
  }
  restore(snap);
}

}  // namespace pipekit
