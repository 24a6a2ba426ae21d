// service.hpp
//
// Models and mixed-initiative browsing sessions. A session keeps the model,
// the history of user moves, and the residual program those moves leave.
// The residual is always recomputed from the model, never edited in place.

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pipekit/ispace.hpp"

namespace pipekit {

struct HistoryEntry {
  enum class Action { Input, Browse };
  Action action = Action::Input;
  Assignment delta;

  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

std::string_view to_string(HistoryEntry::Action a);
json to_json(const HistoryEntry& e);

struct View {
  std::string session;
  std::string model;
  Program residual;
  std::vector<LinkTest> available;  // tests of the root-level chains
  bool complete = false;
  Assignment assignment;            // accumulated input, including forced denials
  std::vector<HistoryEntry> breadcrumb;

  /// Same residual, offered tests and accumulated input, whatever moves and
  /// session led there.
  bool same_state(const View& other) const;
};

json to_json(const View& v);

/// Tests a user can pick next: arms of the chains at the top of `p`.
std::vector<LinkTest> available_tests(const Program& p);

/// Parses `Party=Dem, State=CA, !Rep` into key/value pairs.
std::vector<std::pair<std::string, std::string>> parse_input_text(std::string_view text);

class Service {
 public:
  Service() = default;
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Parses and registers a DSL model. An empty id picks `model-<n>`.
  /// Throws SyntaxError (and friends) for bad text, DuplicateId for a taken id.
  std::string upload_model(std::string_view dsl, std::string id = {});
  std::string add_model(Program p, std::string id = {});
  /// Registers every `*.ispace` file, keyed by file stem. Returns the ids.
  std::vector<std::string> load_models_dir(const std::string& dir);
  std::vector<std::string> list_models() const;
  std::shared_ptr<const Program> model(const std::string& id) const;

  View create_session(const std::string& model_id);
  View view(const std::string& session) const;
  /// Throws InconsistentAssignment or EmptyResidual, leaving the session as it was.
  View apply_input(const std::string& session, const Assignment& delta);
  /// Raw key/value pairs, resolved against the session's model.
  View apply_input(const std::string& session, const std::vector<std::pair<std::string, std::string>>& pairs);
  /// Throws NoSuchArm unless `test` is currently offered.
  View browse(const std::string& session, const LinkTest& test);
  View undo(const std::string& session);
  View reset(const std::string& session);
  std::vector<std::string> list_sessions() const;

  /// Models (as DSL) and sessions (as histories).
  json snapshot() const;
  void restore(const json& snap);
  void save_snapshot(const std::string& path) const;
  /// No-op when the file does not exist.
  void load_snapshot(const std::string& path);

 private:
  struct Session {
    Session(std::string model_id, std::shared_ptr<const Program> m)
        : model_id(std::move(model_id)), model(std::move(m)), current(*model) {}

    std::string id;
    std::string model_id;
    std::shared_ptr<const Program> model;
    std::vector<HistoryEntry> history;
    Assignment accumulated;  // merged deltas
    Assignment applied;      // plus the denials mutex groups force
    Program current;
    mutable std::mutex mu;
  };

  std::shared_ptr<Session> find(const std::string& id) const;
  static View make_view(const Session& s);
  static void recompute(Session& s);
  static View push(Session& s, HistoryEntry entry);
  std::string fresh_token() const;

  mutable std::shared_mutex models_mu_;
  std::map<std::string, std::shared_ptr<const Program>> models_;
  std::map<std::string, std::string> sources_;  // model id -> DSL
  std::size_t next_model_ = 1;

  mutable std::shared_mutex sessions_mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

}  // namespace pipekit
