#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "fairdiv/json_io.hpp"
#include "fairdiv/oracles.hpp"
#include "fairdiv/solver.hpp"

namespace fairdiv {

/// Everything needed to run (or re-run) a solve: the problem, which players
/// answer live, and the valuations of the simulated ones.
struct SessionSpec {
  ProblemSpec problem;
  std::string framing;  // "cake", "cakes", "shifts" or "rent"
  std::set<PlayerId> interactive;
  std::uint64_t seed = 0;
  std::optional<ValuationProfile> valuations;  // random from seed when absent
  std::chrono::seconds timeout{600};
};

/// Parses a session/batch spec body. "players" is a count (ids 1..p) or a list
/// of ids. Throws JsonError or HypothesisError.
SessionSpec session_spec_from_json(const json& j);
json session_spec_to_json(const SessionSpec& spec);

/// Valuations for the simulated (non-interactive) players.
ValuationProfile simulated_profile(const SessionSpec& spec);

struct LoggedAnswer {
  std::uint64_t query_id = 0;
  PlayerId player = 0;
  std::string division;  // PolytopePoint::key()
  Selection selection;
};

json answer_to_json(const LoggedAnswer& a);
LoggedAnswer answer_from_json(const json& j, const std::string& path);

class SessionTimeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SessionClosed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ReplayMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SessionState { scanning, awaiting_answer, done, failed };

const char* to_string(SessionState state);

/// One live solve. The scan runs on a worker thread; each interactive query
/// parks it until submit() delivers a valid answer.
class Session : public AnswerChannel {
 public:
  Session(std::string id, SessionSpec spec, std::optional<std::filesystem::path> log_file = std::nullopt);
  ~Session() override;
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  void start();

  struct Snapshot {
    SessionState state = SessionState::scanning;
    std::optional<OracleQuery> pending;
    std::size_t answered = 0;
    std::string error;
  };
  Snapshot snapshot() const;
  /// Blocks until the state leaves scanning or the wait elapses.
  Snapshot wait(std::chrono::milliseconds max_wait) const;

  enum class SubmitStatus { accepted, stale, invalid, closed };
  struct SubmitResult {
    SubmitStatus status = SubmitStatus::accepted;
    std::optional<Violation> violation;
  };
  SubmitResult submit(std::uint64_t query_id, const Selection& selection);

  std::optional<SolveReport> report() const;
  std::vector<LoggedAnswer> answers() const;
  const SessionSpec& spec() const { return spec_; }
  const std::string& id() const { return id_; }

  Selection ask(const OracleQuery& query) override;

 private:
  void run();
  void finish(SessionState state, std::optional<SolveReport> report, std::string error);
  void append_log(const json& line);

  const std::string id_;
  const SessionSpec spec_;
  std::optional<std::filesystem::path> log_file_;
  mutable std::mutex mutex_;
  mutable std::condition_variable changed_;
  SessionState state_ = SessionState::scanning;
  std::optional<OracleQuery> pending_;
  std::optional<Selection> answer_;
  bool closing_ = false;
  std::vector<LoggedAnswer> log_;
  std::optional<SolveReport> report_;
  std::string error_;
  std::thread worker_;
};

/// Answers interactive queries from a recorded log, in order.
class ReplayChannel : public AnswerChannel {
 public:
  explicit ReplayChannel(std::vector<LoggedAnswer> log) : log_(std::move(log)) {}
  Selection ask(const OracleQuery& query) override;
  bool exhausted() const { return next_ == log_.size(); }

 private:
  std::vector<LoggedAnswer> log_;
  std::size_t next_ = 0;
};

/// Routes interactive players to `channel` and the rest to simulated valuations.
std::unique_ptr<Oracle> build_oracle(const SessionSpec& spec, AnswerChannel* channel);

/// Re-runs a session against its answer log; the report matches the original.
SolveReport replay_session(const SessionSpec& spec, const std::vector<LoggedAnswer>& log);

/// Reads an append-only session log: first line the spec, then one answer per line.
std::pair<SessionSpec, std::vector<LoggedAnswer>> read_session_log(const std::filesystem::path& path);

/// In-memory registry of sessions.
class SessionRegistry {
 public:
  explicit SessionRegistry(std::optional<std::filesystem::path> log_dir = std::nullopt) : log_dir_(std::move(log_dir)) {}
  std::shared_ptr<Session> create(SessionSpec spec);
  std::shared_ptr<Session> find(const std::string& id) const;
  std::size_t size() const;

 private:
  std::optional<std::filesystem::path> log_dir_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
};

}  // namespace fairdiv
