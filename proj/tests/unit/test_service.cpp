#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>

#include "rewardkit/oracle/utility_oracle.hpp"
#include "rewardkit/service/http.hpp"
#include "support/fixtures.hpp"

using namespace rewardkit;
using namespace rewardkit::service;
using rewardkit::testing::D;

namespace {

/// Answers pending queries from `oracle`, optionally overriding the k-th answer.
Session drive(Session s, PreferenceOracle& oracle, std::optional<std::pair<std::size_t, Verdict>> override_k = {}) {
  std::size_t k = 0;
  while (s.status() == SessionStatus::AwaitingAnswer) {
    const auto& [a, b] = *s.pending();
    Verdict v = oracle.compare(a, b);
    if (override_k && override_k->first == k) v = override_k->second;
    s.answer(v);
    ++k;
  }
  return s;
}

std::string offline_result(PreferenceOracle& oracle, double epsilon, std::size_t* comparisons = nullptr) {
  design::DesignOptions opt;
  opt.epsilon = epsilon;
  opt.reference_scale = false;
  auto res = design::design_reward(oracle, opt);
  if (comparisons) *comparisons = res.diagnostics.comparisons;
  return session_result_json(res, {}, oracle.alphabet()).dump();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("rewardkit-test-" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) + "-" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("scripted G1 session matches the offline design byte for byte") {
  auto spec = testing::g1_spec();
  auto oracle = UtilityOracle::markov(spec);
  auto s = Session::create("g1", {spec.alphabet(), 1e-6, std::nullopt});
  CHECK(s.status() == SessionStatus::AwaitingAnswer);
  CHECK_THROWS_AS(s.result(), SessionStateError);
  s = drive(std::move(s), *oracle);
  REQUIRE(s.status() == SessionStatus::Complete);

  auto fresh = UtilityOracle::markov(spec);
  std::size_t comparisons = 0;
  CHECK(s.result().dump() == offline_result(*fresh, 1e-6, &comparisons));
  CHECK(s.answered() == comparisons);

  const auto& out = s.design_result()->spec;
  const auto a = spec.alphabet().parse_name("a"), b = spec.alphabet().parse_name("b");
  CHECK(std::fabs(out.reward(a) - 2.0 / 3) <= 1e-5);
  CHECK(std::fabs(out.discount(a) - 0.5) <= 1e-4);
  CHECK(std::fabs(out.discount(b) - 1.0) <= 1e-4);

  CHECK_THROWS_AS(s.answer(Verdict::Greater), SessionStateError);
  CHECK_THROWS_AS(s.requery(), SessionStateError);
}

TEST_CASE("restoring any log prefix reproduces the next query") {
  auto spec = testing::g1_spec();
  auto oracle = UtilityOracle::markov(spec);
  auto full = drive(Session::create("g1", {spec.alphabet(), 1e-6, std::nullopt}), *oracle);
  const auto& log = full.log();
  for (std::size_t n = 1; n < log.size(); ++n) {
    std::vector<LogRecord> prefix(log.begin(), log.begin() + static_cast<std::ptrdiff_t>(n));
    // Round trip each record through its serialized form, as the store does.
    for (auto& r : prefix) r = log_record_from_json(Json::parse(to_json(r).dump()));
    auto restored = Session::restore("g1", prefix);
    REQUIRE(restored.pending().has_value());
    CHECK(*restored.pending()->first.support().begin() == *log[n].lhs->support().begin());
    CHECK(restored.pending()->first == *log[n].lhs);
    CHECK(restored.pending()->second == *log[n].rhs);
    auto finished = drive(std::move(restored), *oracle);
    CHECK(finished.result().dump() == full.result().dump());
  }
}

TEST_CASE("transitivity cycle detection") {
  auto alpha = Alphabet::designer({"a", "b", "c"});
  const auto A = D(alpha, {"a"}), B = D(alpha, {"b"}), C = D(alpha, {"c"});
  std::vector<LoggedAnswer> answers{{A, B, Verdict::Greater}, {B, C, Verdict::Greater}};
  CHECK_FALSE(find_transitivity_cycle(answers, {1, 2}));
  answers.push_back({C, A, Verdict::Greater});
  auto cyc = find_transitivity_cycle(answers, {1, 2, 3});
  REQUIRE(cyc);
  CHECK(cyc->kind == "transitivity-cycle");
  CHECK(cyc->witness.queries.size() == 3);
  CHECK(cyc->requery_seq == 3u);

  // Indifference chains close a cycle only with a strict step.
  std::vector<LoggedAnswer> weak{{A, B, Verdict::Indifferent}, {B, C, Verdict::Indifferent}, {C, A, Verdict::Indifferent}};
  CHECK_FALSE(find_transitivity_cycle(weak, {1, 2, 3}));
  weak.back().verdict = Verdict::Less;
  CHECK(find_transitivity_cycle(weak, {1, 2, 3}));
}

TEST_CASE("a contradicting answer turns the session inconsistent and requery recovers") {
  auto spec = testing::g1_spec();
  auto oracle = UtilityOracle::markov(spec);
  const std::string offline = offline_result(*UtilityOracle::markov(spec), 1e-6);
  std::map<std::string, int> kinds;
  auto reference = drive(Session::create("g1", {spec.alphabet(), 1e-6, std::nullopt}), *oracle);
  for (std::size_t k = 0; k + 1 < reference.log().size(); ++k) {
    const auto right = reference.log()[k + 1].verdict;
    if (right == Verdict::Indifferent) continue;
    auto s = drive(Session::create("g1", {spec.alphabet(), 1e-6, std::nullopt}), *oracle, std::pair{k, flip(right)});
    if (s.status() == SessionStatus::Complete) continue;
    REQUIRE(s.status() == SessionStatus::Inconsistent);
    REQUIRE(s.inconsistency());
    ++kinds[s.inconsistency()->kind];
    auto res = s.result();
    CHECK(res["spec"].is_null());
    CHECK(res["inconsistencies"].size() == 1);
    CHECK_THROWS_AS(s.answer(Verdict::Greater), SessionStateError);
    CHECK(*s.inconsistency()->requery_seq >= k + 1);
    if (s.inconsistency()->kind == "transitivity-cycle") {
      // Every step of the witness is an answer from the log.
      for (const auto& q : s.inconsistency()->witness.queries) {
        bool logged = false;
        for (const auto& r : s.log())
          logged = logged || (r.kind == LogRecord::Kind::Answer && *r.lhs == q.lhs && *r.rhs == q.rhs);
        CHECK(logged);
      }
    }
    // Withdrawing the flipped answer and answering truthfully reaches the offline result.
    const std::uint64_t bad = k + 1;
    s.requery(bad);
    CHECK(s.log().back().kind == LogRecord::Kind::Retract);
    CHECK(s.log().back().retracts == bad);
    CHECK(s.answered() == k);
    REQUIRE(s.pending());
    CHECK(s.pending()->first == *reference.log()[k + 1].lhs);
    s = drive(std::move(s), *oracle);
    REQUIRE(s.status() == SessionStatus::Complete);
    CHECK(s.result().dump() == offline);
  }
  CHECK(kinds["transitivity-cycle"] > 0);
  CHECK(kinds["continuity"] > 0);
  CHECK(kinds["discount-range"] > 0);
}

TEST_CASE("session creation edge cases") {
  CHECK_THROWS_AS(Session::create("x", {Alphabet::designer({}), 1e-6, std::nullopt}), std::invalid_argument);
  CHECK_THROWS_AS(Session::create("x", {testing::ab_alphabet(), 0.0, std::nullopt}), std::invalid_argument);
  CHECK_THROWS_AS(Session::create("x", {testing::ab_alphabet(), 1e-6, 0}), design::QueryBudgetExceeded);

  SUBCASE("single symbol") {
    auto alpha = Alphabet::designer({"a"});
    std::map<Transition, RewardEntry> e{{alpha.parse_name("a"), {1.0, 0.5, true}}};
    RewardSpec spec(alpha, e);
    auto oracle = UtilityOracle::markov(spec);
    auto s = drive(Session::create("one", {alpha, 1e-6, std::nullopt}), *oracle);
    REQUIRE(s.status() == SessionStatus::Complete);
    CHECK(s.result().dump() == offline_result(*UtilityOracle::markov(spec), 1e-6));
    CHECK(std::fabs(s.design_result()->spec.discount(alpha.parse_name("a")) - 0.5) <= 1e-4);
  }

  SUBCASE("budget exhausted mid-session") {
    auto spec = testing::g1_spec();
    auto oracle = UtilityOracle::markov(spec);
    auto s = drive(Session::create("b", {spec.alphabet(), 1e-6, 4}), *oracle);
    CHECK(s.status() == SessionStatus::Failed);
    CHECK(s.answered() == 4);
    CHECK_FALSE(s.error().empty());
    CHECK_THROWS_AS(s.result(), SessionStateError);
  }

  SUBCASE("pending query rendering") {
    auto s = Session::create("r", {testing::ab_alphabet(), 1e-6, std::nullopt});
    auto j = s.pending_json();
    CHECK(j["seq"] == 1);
    CHECK(j["lhs"].is_object());
    REQUIRE(j["rendering"]["lhs"].size() == 1);
    CHECK(j["rendering"]["lhs"][0]["odds"] == "100.00%");
  }
}

TEST_CASE("store persists logs and survives a torn final line") {
  TempDir dir;
  auto spec = testing::g1_spec();
  auto oracle = UtilityOracle::markov(spec);
  std::string id;
  {
    SessionStore store(dir.path);
    auto created = store.create({spec.alphabet(), 1e-6, std::nullopt});
    id = created["id"];
    CHECK(id.size() == 16);
    CHECK(created["status"] == "awaiting-answer");
    for (int i = 0; i < 10; ++i) {
      auto v = store.view(id);
      auto a = lottery_from_json(v["pending_query"]["lhs"]), b = lottery_from_json(v["pending_query"]["rhs"]);
      store.answer(id, oracle->compare(a, b));
    }
  }
  const auto log_file = dir.path / (id + ".jsonl");
  REQUIRE(std::filesystem::exists(log_file));
  CHECK(SessionStore::read_log(log_file).size() == 11);

  // Simulate a crash mid-append.
  { std::ofstream(log_file, std::ios::app) << R"({"seq":11,"type":"ans)"; }
  SessionStore store(dir.path);
  CHECK(store.load() == 1);
  auto v = store.view(id);
  CHECK(v["answered"] == 10);
  CHECK(v["log_length"] == 11);
  CHECK_THROWS_AS(store.view("missing"), SessionNotFound);

  // A torn line in the middle is corruption, not a crash artifact.
  {
    auto text = [&] {
      std::ifstream in(log_file);
      return std::string(std::istreambuf_iterator<char>(in), {});
    }();
    std::ofstream(dir.path / "bad.jsonl") << "{\"seq\":0,\n" << text;
    SessionStore other(dir.path);
    CHECK_THROWS(other.load());
    std::filesystem::remove(dir.path / "bad.jsonl");
  }

  // Loading truncated the torn tail, so further appends stay readable.
  CHECK(SessionStore::read_log(log_file).size() == 11);
  auto pending = v["pending_query"];
  CHECK(pending["seq"] == 11);
  store.answer(id, oracle->compare(lottery_from_json(pending["lhs"]), lottery_from_json(pending["rhs"])));
  while (store.view(id)["status"] == "awaiting-answer") {
    auto p = store.view(id)["pending_query"];
    store.answer(id, oracle->compare(lottery_from_json(p["lhs"]), lottery_from_json(p["rhs"])));
  }
  CHECK(store.view(id)["status"] == "complete");
  const auto cached = dir.path / (id + ".result.json");
  REQUIRE(std::filesystem::exists(cached));
  CHECK(Json::parse(std::ifstream(cached)) == store.result(id));
  CHECK(store.result(id).dump() == offline_result(*UtilityOracle::markov(spec), 1e-6));
  SessionStore reloaded(dir.path);
  reloaded.load();
  CHECK(reloaded.result(id).dump() == store.result(id).dump());
}

TEST_CASE("wire API") {
  SessionStore store;
  Service service(store);
  auto spec = testing::g1_spec();
  auto oracle = UtilityOracle::markov(spec);

  auto created = service.handle("POST", "/sessions", R"({"alphabet": ["a", "b"], "epsilon": 1e-6})");
  REQUIRE(created.status == 201);
  const std::string id = created.body["id"];
  REQUIRE(created.body["pending_query"].is_object());

  auto view = service.handle("GET", "/sessions/" + id, "");
  CHECK(view.status == 200);
  CHECK(view.body["status"] == "awaiting-answer");
  CHECK(service.handle("GET", "/sessions/" + id + "/result", "").status == 409);

  Json last;
  Json pending = created.body["pending_query"];
  std::size_t answers = 0;
  while (!pending.is_null()) {
    const auto v = oracle->compare(lottery_from_json(pending["lhs"]), lottery_from_json(pending["rhs"]));
    auto r = service.handle("POST", "/sessions/" + id + "/answer",
                            Json{{"verdict", std::string(to_string(v))}}.dump());
    REQUIRE(r.status == 200);
    ++answers;
    last = r.body;
    pending = r.body.value("pending_query", Json());
  }
  CHECK(last["status"] == "complete");
  auto result = service.handle("GET", "/sessions/" + id + "/result", "");
  CHECK(result.status == 200);
  std::size_t comparisons = 0;
  CHECK(result.body.dump() == offline_result(*UtilityOracle::markov(spec), 1e-6, &comparisons));
  CHECK(answers == comparisons);
  CHECK(last["result"] == result.body);

  CHECK(service.handle("POST", "/sessions/" + id + "/answer", R"({"verdict": "indifferent"})").status == 409);
  CHECK(service.handle("POST", "/sessions/" + id + "/requery", "").status == 409);
  CHECK(service.handle("GET", "/sessions/nope", "").status == 404);
  CHECK(service.handle("GET", "/elsewhere", "").status == 404);
  CHECK(service.handle("DELETE", "/sessions/" + id, "").status == 405);
  CHECK(service.handle("POST", "/sessions", "{not json").status == 400);
  CHECK(service.handle("POST", "/sessions", R"({"alphabet": []})").status == 400);
  CHECK(service.handle("POST", "/sessions", R"({"alphabet": ["a"], "query_budget": 0})").status == 422);

  auto other = service.handle("POST", "/sessions", Json{{"alphabet", to_json(spec.alphabet())}}.dump());
  REQUIRE(other.status == 201);
  CHECK(service.handle("POST", "/sessions/" + std::string(other.body["id"]) + "/answer", R"({"verdict": "sideways"})")
            .status == 400);
}

TEST_CASE("planted cycle over the wire") {
  SessionStore store;
  Service service(store);
  auto spec = testing::g1_spec();
  auto oracle = UtilityOracle::markov(spec);
  auto created = service.handle("POST", "/sessions", R"({"alphabet": ["a", "b"]})");
  const std::string id = created.body["id"];
  Json pending = created.body["pending_query"];
  // Answer the first comparison backwards, everything else truthfully.
  bool first = true;
  Json last;
  while (!pending.is_null()) {
    auto v = oracle->compare(lottery_from_json(pending["lhs"]), lottery_from_json(pending["rhs"]));
    if (first) v = flip(v);
    first = false;
    last = service.handle("POST", "/sessions/" + id + "/answer", Json{{"verdict", std::string(to_string(v))}}.dump()).body;
    pending = last.value("pending_query", Json());
  }
  REQUIRE(last["status"] == "inconsistent");
  CHECK(last["inconsistency"]["kind"] == "transitivity-cycle");
  CHECK(last["inconsistency"]["witness"]["params"]["answer_seqs"].size() >= 2);
  auto result = service.handle("GET", "/sessions/" + id + "/result", "");
  CHECK(result.status == 200);
  CHECK(result.body["spec"].is_null());

  auto re = service.handle("POST", "/sessions/" + id + "/requery", R"({"seq": 1})");
  REQUIRE(re.status == 200);
  CHECK(re.body["status"] == "awaiting-answer");
  CHECK(re.body["pending_query"]["lhs"] == created.body["pending_query"]["lhs"]);
  CHECK(re.body["pending_query"]["rhs"] == created.body["pending_query"]["rhs"]);
}

TEST_CASE("concurrent sessions over HTTP") {
  TempDir dir;
  SessionStore store(dir.path);
  Service service(store);
  httplib::Server server;
  mount(service, server);
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread listener([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  auto spec = testing::g1_spec();
  const std::string offline = offline_result(*UtilityOracle::markov(spec), 1e-6);
  constexpr int kClients = 6;
  std::vector<std::string> results(kClients);
  std::vector<std::thread> clients;
  for (int c = 0; c < kClients; ++c)
    clients.emplace_back([&, c] {
      auto oracle = UtilityOracle::markov(spec);
      httplib::Client client("127.0.0.1", port);
      auto r = client.Post("/sessions", R"({"alphabet": ["a", "b"]})", "application/json");
      if (!r || r->status != 201) return;
      const auto body = Json::parse(r->body);
      const std::string id = body["id"];
      Json pending = body["pending_query"];
      while (!pending.is_null()) {
        const auto v = oracle->compare(lottery_from_json(pending["lhs"]), lottery_from_json(pending["rhs"]));
        auto a = client.Post("/sessions/" + id + "/answer", Json{{"verdict", std::string(to_string(v))}}.dump(),
                             "application/json");
        if (!a) return;
        pending = Json::parse(a->body).value("pending_query", Json());
      }
      auto res = client.Get("/sessions/" + id + "/result");
      if (res) results[c] = res->body;
    });
  for (auto& t : clients) t.join();
  server.stop();
  listener.join();

  for (const auto& r : results) CHECK(r == offline);
  SessionStore reloaded(dir.path);
  CHECK(reloaded.load() == kClients);
  for (const auto& id : reloaded.ids()) CHECK(reloaded.result(id).dump() == offline);
}
