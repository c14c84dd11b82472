#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include "fairdiv/session.hpp"

using namespace fairdiv;
using namespace std::chrono_literals;

namespace {

SessionSpec rent_spec(std::uint64_t seed = 3) {
  return session_spec_from_json(json{{"mode", "rent"}, {"n", 3}, {"players", 5}, {"interactive", {1}}, {"seed", seed}, {"mesh", 1}, {"rounds", 2}});
}

// Answers every pending query from the given valuations until the session ends.
void drive(Session& s, const ValuationProfile& human, int* answered = nullptr) {
  for (;;) {
    auto snap = s.wait(2000ms);
    if (snap.state == SessionState::done || snap.state == SessionState::failed) return;
    if (!snap.pending) continue;
    auto r = s.submit(snap.pending->id, simulated_answer(human, *snap.pending));
    REQUIRE(r.status == Session::SubmitStatus::accepted);
    if (answered) ++*answered;
  }
}

ValuationProfile human_for(const SessionSpec& spec, std::uint64_t seed) {
  const int factors = spec.problem.mode == Mode::single_cake ? 1 : spec.problem.k;
  return random_profile(std::vector<PlayerId>(spec.interactive.begin(), spec.interactive.end()), factors, seed);
}

}  // namespace

TEST_CASE("session specs parse with defaults and reject bad fields") {
  auto spec = rent_spec();
  CHECK(spec.framing == "rent");
  CHECK(spec.problem.mode == Mode::shift_cover);
  CHECK(spec.problem.k == 2);
  CHECK(spec.problem.players == std::vector<PlayerId>{1, 2, 3, 4, 5});
  CHECK(spec.interactive == std::set<PlayerId>{1});
  CHECK(spec.timeout == 600s);

  auto where = [](const json& j) -> std::string {
    try {
      session_spec_from_json(j);
    } catch (const JsonError& e) {
      return e.where();
    }
    return "";
  };
  CHECK(where(json{{"n", 3}, {"players", 2}}) == "$.mode");
  CHECK(where(json{{"mode", "pie"}, {"n", 3}, {"players", 2}}) == "$.mode");
  CHECK(where(json{{"mode", "cake"}, {"n", "three"}, {"players", 2}}) == "$.n");
  CHECK(where(json{{"mode", "cake"}, {"n", 3}, {"players", 2}, {"interactive", {7}}}) == "$.interactive[0]");
  CHECK_THROWS_AS(session_spec_from_json(json{{"mode", "cake"}, {"n", 3}, {"players", 5}}), HypothesisError);

  auto back = session_spec_from_json(session_spec_to_json(spec));
  CHECK(session_spec_to_json(back) == session_spec_to_json(spec));
}

TEST_CASE("simulated profile covers exactly the non-interactive players") {
  auto spec = rent_spec();
  auto p = simulated_profile(spec);
  REQUIRE(p.players.size() == 4);
  CHECK_FALSE(p.has_player(1));
  CHECK(p.player(2).factors.size() == 2);
}

TEST_CASE("registry needs an interactive player") {
  SessionRegistry reg;
  auto spec = rent_spec();
  spec.interactive.clear();
  CHECK_THROWS_AS(reg.create(spec), HypothesisError);
  CHECK(reg.size() == 0);
}

TEST_CASE("rent session completes with three players housed in both buildings") {
  SessionRegistry reg;
  auto spec = rent_spec();
  auto s = reg.create(spec);
  CHECK(s->id() == "s1");
  CHECK(reg.find("s1") == s);
  CHECK(reg.find("nope") == nullptr);

  auto first = s->wait(5000ms);
  REQUIRE(first.state == SessionState::awaiting_answer);
  REQUIRE(first.pending.has_value());
  CHECK(first.pending->kind == QueryKind::shift_tuple);
  CHECK(first.pending->arity() == 2);
  CHECK(first.pending->player == 1);

  // One room in only one building: arity violation, query stays open.
  auto bad = s->submit(first.pending->id, {0});
  CHECK(bad.status == Session::SubmitStatus::invalid);
  CHECK(bad.violation->rule == "arity");
  CHECK(s->submit(first.pending->id + 100, {0, 0}).status == Session::SubmitStatus::stale);
  CHECK(s->snapshot().pending->id == first.pending->id);

  int answered = 0;
  drive(*s, human_for(spec, 99), &answered);
  auto snap = s->snapshot();
  REQUIRE(snap.state == SessionState::done);
  CHECK(snap.answered == static_cast<std::size_t>(answered));
  auto report = s->report();
  REQUIRE(report.has_value());
  CHECK(report->cover.size() == 3);
  CHECK(covers_all_shifts(report->cover, 3, 2));
  CHECK(pairwise_disjoint(report->cover, true));

  // Monotone: nothing reopens a finished session.
  CHECK(s->submit(first.pending->id, {0, 0}).status == Session::SubmitStatus::closed);
  CHECK(s->snapshot().state == SessionState::done);

  // Cache contract: no (player, division) is asked twice.
  std::set<std::pair<PlayerId, std::string>> seen;
  for (const auto& a : s->answers()) CHECK(seen.emplace(a.player, a.division).second);
}

TEST_CASE("prefer-empty violations are rejected with the rule name") {
  Session s("direct", rent_spec());
  OracleQuery q;
  q.id = 1;
  q.player = 1;
  q.kind = QueryKind::shift_tuple;
  q.k = 2;
  q.division = PolytopePoint({SimplexPoint({Rational(1, 2), Rational(1, 2), 0}),
                              SimplexPoint({Rational(1, 3), Rational(1, 3), Rational(1, 3)})});
  Selection got;
  std::thread asker([&] { got = s.ask(q); });
  auto snap = s.wait(5000ms);
  REQUIRE(snap.pending.has_value());
  auto r = s.submit(1, {0, 1});
  CHECK(r.status == Session::SubmitStatus::invalid);
  CHECK(r.violation->rule == "prefer-empty");
  CHECK(s.submit(1, {2, 1}).status == Session::SubmitStatus::accepted);
  asker.join();
  CHECK(got == Selection{2, 1});
}

TEST_CASE("unanswered sessions time out into the failed state") {
  SessionRegistry reg;
  auto j = session_spec_to_json(rent_spec());
  j["timeout_seconds"] = 1;
  auto s = reg.create(session_spec_from_json(j));
  auto first = s->wait(5000ms);
  REQUIRE(first.pending.has_value());
  for (int i = 0; i < 50 && s->snapshot().state != SessionState::failed; ++i) std::this_thread::sleep_for(100ms);
  auto snap = s->snapshot();
  CHECK(snap.state == SessionState::failed);
  CHECK(snap.error.find("no answer") != std::string::npos);
  CHECK(s->submit(first.pending->id, {0, 0}).status == Session::SubmitStatus::closed);
}

TEST_CASE("answer logs replay to the identical report") {
  const auto dir = std::filesystem::temp_directory_path() / "fairdiv_session_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  SessionRegistry reg(dir);
  auto spec = session_spec_from_json(json{{"mode", "cakes"}, {"n", 3}, {"k", 2}, {"players", 5}, {"interactive", {2, 4}}, {"seed", 8}, {"mesh", 1}, {"rounds", 2}});
  auto s = reg.create(spec);
  drive(*s, human_for(spec, 21));
  REQUIRE(s->report().has_value());
  const auto original = render_report(*s->report());

  auto [logged_spec, answers] = read_session_log(dir / "s1.jsonl");
  CHECK(answers.size() == s->answers().size());
  CHECK(render_report(replay_session(logged_spec, answers)) == original);

  // A tampered log no longer replays.
  auto broken = answers;
  REQUIRE_FALSE(broken.empty());
  broken.front().division = "0,1;1,0";
  CHECK_THROWS_AS(replay_session(logged_spec, broken), ReplayMismatch);
  auto extra = answers;
  extra.push_back(answers.back());
  CHECK_THROWS_AS(replay_session(logged_spec, extra), ReplayMismatch);

  std::ifstream in(dir / "s1.jsonl");
  std::string last, line;
  while (std::getline(in, line)) last = line;
  CHECK(json::parse(last)["status"] == "done");
  std::filesystem::remove_all(dir);
}

TEST_CASE("answer log lines round trip") {
  LoggedAnswer a{3, 2, "1/2,1/2;1,0", {0, 1}};
  auto j = answer_to_json(a);
  CHECK(j["selection"] == json::parse("[1, 2]"));
  auto b = answer_from_json(j, "x");
  CHECK(b.query_id == 3);
  CHECK(b.selection == a.selection);
  CHECK_THROWS_AS(answer_from_json(json{{"player", 1}}, "line 4"), JsonError);
}
