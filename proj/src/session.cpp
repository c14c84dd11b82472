#include "fairdiv/session.hpp"

#include <algorithm>
#include <fstream>

#include <spdlog/spdlog.h>

namespace fairdiv {

namespace {

template <class T>
T get_or(const json& j, const char* name, T fallback, const char* kind) {
  auto it = j.find(name);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw JsonError(std::string("$.") + name, std::string("expected ") + kind);
  }
}

}  // namespace

SessionSpec session_spec_from_json(const json& j) {
  if (!j.is_object()) throw JsonError("$", "expected an object");
  SessionSpec spec;
  if (!j.contains("mode")) throw JsonError("$.mode", "missing field");
  spec.framing = get_or<std::string>(j, "mode", "", "a string");
  try {
    spec.problem.mode = parse_mode(spec.framing);
  } catch (const std::invalid_argument& e) {
    throw JsonError("$.mode", e.what());
  }
  if (!j.contains("n")) throw JsonError("$.n", "missing field");
  spec.problem.n = get_or<int>(j, "n", 0, "an integer");
  spec.problem.k = get_or<int>(j, "k", spec.framing == "rent" ? 2 : 1, "an integer");
  if (!j.contains("players")) throw JsonError("$.players", "missing field");
  const auto& players = j["players"];
  if (players.is_number_integer()) {
    const int p = players.get<int>();
    if (p < 1) throw JsonError("$.players", "must be positive");
    for (int i = 1; i <= p; ++i) spec.problem.players.push_back(i);
  } else if (players.is_array()) {
    for (std::size_t i = 0; i < players.size(); ++i) {
      if (!players[i].is_number_integer()) throw JsonError("$.players[" + std::to_string(i) + "]", "expected an integer id");
      spec.problem.players.push_back(players[i].get<int>());
    }
  } else {
    throw JsonError("$.players", "expected a count or a list of ids");
  }
  if (j.contains("interactive")) {
    const auto& inter = j["interactive"];
    if (!inter.is_array()) throw JsonError("$.interactive", "expected a list of player ids");
    for (std::size_t i = 0; i < inter.size(); ++i) {
      if (!inter[i].is_number_integer()) throw JsonError("$.interactive[" + std::to_string(i) + "]", "expected an integer id");
      const PlayerId id = inter[i].get<int>();
      if (std::find(spec.problem.players.begin(), spec.problem.players.end(), id) == spec.problem.players.end()) {
        throw JsonError("$.interactive[" + std::to_string(i) + "]", "unknown player " + std::to_string(id));
      }
      spec.interactive.insert(id);
    }
  }
  spec.seed = get_or<std::uint64_t>(j, "seed", 0, "a nonnegative integer");
  spec.problem.mesh.initial = get_or<int>(j, "mesh", 1, "an integer");
  spec.problem.mesh.factor = get_or<int>(j, "factor", 2, "an integer");
  spec.problem.mesh.max_rounds = get_or<int>(j, "rounds", 3, "an integer");
  spec.problem.epsilon = get_or<double>(j, "epsilon", 1e-6, "a number");
  spec.timeout = std::chrono::seconds(get_or<std::int64_t>(j, "timeout_seconds", 600, "an integer"));
  if (spec.timeout.count() <= 0) throw JsonError("$.timeout_seconds", "must be positive");
  validate_spec(spec.problem);
  if (j.contains("valuations") && !j["valuations"].is_null()) {
    try {
      spec.valuations = profile_from_json(j["valuations"]);
    } catch (const JsonError& e) {
      throw JsonError("$.valuations." + e.where(), std::string(e.what()).substr(e.where().size() + 2));
    }
  }
  (void)simulated_profile(spec);
  return spec;
}

json session_spec_to_json(const SessionSpec& spec) {
  json out;
  out["mode"] = spec.framing.empty() ? to_string(spec.problem.mode) : spec.framing;
  out["n"] = spec.problem.n;
  out["k"] = spec.problem.k;
  out["players"] = spec.problem.players;
  out["interactive"] = std::vector<PlayerId>(spec.interactive.begin(), spec.interactive.end());
  out["seed"] = spec.seed;
  out["mesh"] = spec.problem.mesh.initial;
  out["factor"] = spec.problem.mesh.factor;
  out["rounds"] = spec.problem.mesh.max_rounds;
  out["epsilon"] = spec.problem.epsilon;
  out["timeout_seconds"] = spec.timeout.count();
  if (spec.valuations) out["valuations"] = profile_to_json(*spec.valuations);
  return out;
}

ValuationProfile simulated_profile(const SessionSpec& spec) {
  const int factors = spec.problem.mode == Mode::single_cake ? 1 : spec.problem.k;
  ValuationProfile all = spec.valuations ? *spec.valuations : random_profile(spec.problem.players, factors, spec.seed);
  ValuationProfile out;
  for (PlayerId id : spec.problem.players) {
    if (spec.interactive.count(id)) continue;
    if (!all.has_player(id)) throw JsonError("$.valuations", "no valuation for player " + std::to_string(id));
    const auto& pv = all.player(id);
    if (static_cast<int>(pv.factors.size()) != factors) {
      throw JsonError("$.valuations", "player " + std::to_string(id) + " has " + std::to_string(pv.factors.size()) +
                                          " factors, expected " + std::to_string(factors));
    }
    out.players.push_back(pv);
  }
  return out;
}

json answer_to_json(const LoggedAnswer& a) {
  return {{"query_id", a.query_id}, {"player", a.player}, {"division", a.division}, {"selection", selection_to_json(a.selection)}};
}

LoggedAnswer answer_from_json(const json& j, const std::string& path) {
  LoggedAnswer a;
  try {
    a.query_id = j.at("query_id").get<std::uint64_t>();
    a.player = j.at("player").get<int>();
    a.division = j.at("division").get<std::string>();
  } catch (const json::exception& e) {
    throw JsonError(path, e.what());
  }
  a.selection = selection_from_json(j.at("selection"), path + ".selection");
  return a;
}

const char* to_string(SessionState state) {
  switch (state) {
    case SessionState::scanning: return "scanning";
    case SessionState::awaiting_answer: return "awaiting_answer";
    case SessionState::done: return "done";
    case SessionState::failed: return "failed";
  }
  return "unknown";
}

Session::Session(std::string id, SessionSpec spec, std::optional<std::filesystem::path> log_file)
    : id_(std::move(id)), spec_(std::move(spec)), log_file_(std::move(log_file)) {}

Session::~Session() {
  {
    std::lock_guard lock(mutex_);
    closing_ = true;
  }
  changed_.notify_all();
  if (worker_.joinable()) worker_.join();
}

void Session::start() {
  append_log({{"spec", session_spec_to_json(spec_)}});
  worker_ = std::thread([this] { run(); });
}

void Session::append_log(const json& line) {
  if (!log_file_) return;
  std::ofstream out(*log_file_, std::ios::app);
  out << line.dump() << '\n';
}

void Session::run() {
  try {
    auto oracle = build_oracle(spec_, this);
    ProblemSpec problem = spec_.problem;
    problem.threads = 1;
    auto report = refine_until_stable(problem, *oracle);
    finish(SessionState::done, std::move(report), {});
  } catch (const std::exception& e) {
    spdlog::warn("session {} failed: {}", id_, e.what());
    finish(SessionState::failed, std::nullopt, e.what());
  }
}

void Session::finish(SessionState state, std::optional<SolveReport> report, std::string error) {
  {
    std::lock_guard lock(mutex_);
    state_ = state;
    pending_.reset();
    report_ = std::move(report);
    error_ = std::move(error);
    append_log({{"status", to_string(state_)}});
  }
  changed_.notify_all();
}

Selection Session::ask(const OracleQuery& query) {
  std::unique_lock lock(mutex_);
  if (closing_) throw SessionClosed("session closed");
  pending_ = query;
  answer_.reset();
  state_ = SessionState::awaiting_answer;
  changed_.notify_all();
  const auto deadline = std::chrono::steady_clock::now() + spec_.timeout;
  while (!answer_ && !closing_) {
    if (changed_.wait_until(lock, deadline) == std::cv_status::timeout && !answer_ && !closing_) {
      pending_.reset();
      throw SessionTimeout("no answer to query " + std::to_string(query.id) + " within " +
                           std::to_string(spec_.timeout.count()) + " s");
    }
  }
  if (!answer_) throw SessionClosed("session closed");
  Selection s = std::move(*answer_);
  answer_.reset();
  pending_.reset();
  state_ = SessionState::scanning;
  return s;
}

Session::Snapshot Session::snapshot() const {
  std::lock_guard lock(mutex_);
  Snapshot s;
  s.state = state_;
  if (state_ == SessionState::awaiting_answer && !answer_) s.pending = pending_;
  else if (state_ == SessionState::awaiting_answer) s.state = SessionState::scanning;
  s.answered = log_.size();
  s.error = error_;
  return s;
}

Session::Snapshot Session::wait(std::chrono::milliseconds max_wait) const {
  {
    std::unique_lock lock(mutex_);
    changed_.wait_for(lock, max_wait, [&] {
      return (state_ == SessionState::awaiting_answer && !answer_) || state_ == SessionState::done ||
             state_ == SessionState::failed;
    });
  }
  return snapshot();
}

Session::SubmitResult Session::submit(std::uint64_t query_id, const Selection& selection) {
  {
    std::lock_guard lock(mutex_);
    if (state_ == SessionState::done || state_ == SessionState::failed || closing_) {
      return {SubmitStatus::closed, std::nullopt};
    }
    if (!pending_ || answer_ || pending_->id != query_id) return {SubmitStatus::stale, std::nullopt};
    if (auto v = validate_selection(*pending_, selection)) return {SubmitStatus::invalid, v};
    Selection s = selection;
    if (pending_->kind == QueryKind::cake_subset) std::sort(s.begin(), s.end());
    LoggedAnswer entry{query_id, pending_->player, pending_->division.key(), s};
    append_log({{"answer", answer_to_json(entry)}});
    log_.push_back(std::move(entry));
    answer_ = std::move(s);
  }
  changed_.notify_all();
  return {SubmitStatus::accepted, std::nullopt};
}

std::optional<SolveReport> Session::report() const {
  std::lock_guard lock(mutex_);
  return report_;
}

std::vector<LoggedAnswer> Session::answers() const {
  std::lock_guard lock(mutex_);
  return log_;
}

Selection ReplayChannel::ask(const OracleQuery& query) {
  if (next_ >= log_.size()) throw ReplayMismatch("answer log exhausted at query " + std::to_string(query.id));
  const auto& a = log_[next_];
  if (a.query_id != query.id || a.player != query.player || a.division != query.division.key()) {
    throw ReplayMismatch("logged answer " + std::to_string(next_ + 1) + " does not match query " +
                         std::to_string(query.id) + " of player " + std::to_string(query.player));
  }
  ++next_;
  return a.selection;
}

std::unique_ptr<Oracle> build_oracle(const SessionSpec& spec, AnswerChannel* channel) {
  auto simulated = std::make_shared<SimulatedOracle>(simulated_profile(spec));
  if (spec.interactive.empty()) return std::make_unique<SimulatedOracle>(simulated->profile());
  if (!channel) throw std::invalid_argument("interactive players need an answer channel");
  auto live = std::make_shared<InteractiveOracle>(*channel);
  auto router = std::make_unique<RoutingOracle>();
  for (PlayerId id : spec.problem.players) {
    if (spec.interactive.count(id)) router->route(id, live);
    else router->route(id, simulated);
  }
  return router;
}

SolveReport replay_session(const SessionSpec& spec, const std::vector<LoggedAnswer>& log) {
  ReplayChannel channel(log);
  auto oracle = build_oracle(spec, &channel);
  ProblemSpec problem = spec.problem;
  problem.threads = 1;
  auto report = refine_until_stable(problem, *oracle);
  if (!channel.exhausted()) throw ReplayMismatch("answer log has unused entries");
  return report;
}

std::pair<SessionSpec, std::vector<LoggedAnswer>> read_session_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw JsonError(path.string(), "cannot open file");
  std::optional<SessionSpec> spec;
  std::vector<LoggedAnswer> answers;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(number);
    const json j = parse_json_text(line, where);
    if (j.contains("spec")) {
      if (spec) throw JsonError(where, "second spec line");
      spec = session_spec_from_json(j["spec"]);
    } else if (j.contains("answer")) {
      answers.push_back(answer_from_json(j["answer"], where));
    }
  }
  if (!spec) throw JsonError(path.string(), "log has no spec line");
  return {std::move(*spec), std::move(answers)};
}

std::shared_ptr<Session> SessionRegistry::create(SessionSpec spec) {
  if (spec.interactive.empty()) throw HypothesisError("a session needs at least one interactive player");
  std::shared_ptr<Session> session;
  {
    std::lock_guard lock(mutex_);
    const std::string id = "s" + std::to_string(next_id_++);
    std::optional<std::filesystem::path> log;
    if (log_dir_) log = *log_dir_ / (id + ".jsonl");
    session = std::make_shared<Session>(id, std::move(spec), log);
    sessions_.emplace(id, session);
  }
  session->start();
  return session;
}

std::shared_ptr<Session> SessionRegistry::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::size_t SessionRegistry::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

}  // namespace fairdiv
