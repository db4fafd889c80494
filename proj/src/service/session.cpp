#include "rewardkit/service/session.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>

#include "rewardkit/oracle/json.hpp"

namespace rewardkit::service {

std::string_view to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::AwaitingAnswer: return "awaiting-answer";
    case SessionStatus::Computing: return "computing";
    case SessionStatus::Complete: return "complete";
    case SessionStatus::Inconsistent: return "inconsistent";
    case SessionStatus::Failed: return "failed";
  }
  return "failed";
}

namespace {

Json config_json(const SessionConfig& c) {
  Json j = {{"alphabet", to_json(c.alphabet)}, {"epsilon", c.epsilon}};
  j["query_budget"] = c.query_budget ? Json(*c.query_budget) : Json(nullptr);
  return j;
}

SessionConfig config_from_json(const Json& j) {
  SessionConfig c;
  c.alphabet = alphabet_from_json(j.at("alphabet"));
  c.epsilon = j.value("epsilon", 1e-6);
  if (j.contains("query_budget") && !j.at("query_budget").is_null())
    c.query_budget = j.at("query_budget").get<std::uint64_t>();
  return c;
}

Json inconsistency_json(const Inconsistency& inc, const Alphabet& alphabet) {
  Json j = {{"kind", inc.kind}, {"message", inc.message}, {"witness", to_json(inc.witness, alphabet)}};
  j["requery_seq"] = inc.requery_seq ? Json(*inc.requery_seq) : Json(nullptr);
  return j;
}

}  // namespace

Json to_json(const LogRecord& r) {
  Json j = {{"seq", r.seq}, {"timestamp", r.timestamp}};
  switch (r.kind) {
    case LogRecord::Kind::Create:
      j["type"] = "create";
      j["config"] = config_json(*r.config);
      break;
    case LogRecord::Kind::Answer:
      j["type"] = "answer";
      j["lhs"] = to_json(*r.lhs);
      j["rhs"] = to_json(*r.rhs);
      j["verdict"] = std::string(to_string(r.verdict));
      break;
    case LogRecord::Kind::Retract:
      j["type"] = "retract";
      j["retracts"] = r.retracts;
      break;
  }
  return j;
}

LogRecord log_record_from_json(const Json& j) {
  LogRecord r;
  r.seq = j.at("seq").get<std::uint64_t>();
  r.timestamp = j.value("timestamp", std::string());
  const auto type = j.at("type").get<std::string>();
  if (type == "create") {
    r.kind = LogRecord::Kind::Create;
    r.config = config_from_json(j.at("config"));
  } else if (type == "answer") {
    r.kind = LogRecord::Kind::Answer;
    r.lhs = lottery_from_json(j.at("lhs"));
    r.rhs = lottery_from_json(j.at("rhs"));
    r.verdict = parse_verdict(j.at("verdict").get<std::string>());
  } else if (type == "retract") {
    r.kind = LogRecord::Kind::Retract;
    r.retracts = j.at("retracts").get<std::uint64_t>();
  } else {
    throw std::invalid_argument("unknown log record type '" + type + "'");
  }
  return r;
}

Json session_result_json(const std::optional<design::DesignResult>& design, const std::vector<Inconsistency>& found,
                         const Alphabet& alphabet) {
  Json j = Json::object();
  if (design) {
    j["spec"] = to_json(design->spec);
    j["diagnostics"] = design::to_json(design->diagnostics, alphabet);
  } else {
    j["spec"] = nullptr;
    j["diagnostics"] = nullptr;
  }
  Json inc = Json::array();
  for (const auto& i : found) inc.push_back(inconsistency_json(i, alphabet));
  j["inconsistencies"] = inc;
  return j;
}

std::optional<Inconsistency> find_transitivity_cycle(const std::vector<LoggedAnswer>& answers,
                                                     const std::vector<std::uint64_t>& seqs) {
  // Edge u -> v means "u weakly preferred to v", labelled with its answer.
  struct Edge {
    std::size_t to;
    std::size_t answer;
    bool strict;
  };
  std::map<Lottery, std::size_t> ids;
  auto id = [&](const Lottery& l) { return ids.emplace(l, ids.size()).first->second; };
  std::vector<std::vector<Edge>> adj;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> strict_edges;
  auto add = [&](std::size_t u, std::size_t v, std::size_t k, bool strict) {
    if (adj.size() <= std::max(u, v)) adj.resize(std::max(u, v) + 1);
    adj[u].push_back({v, k, strict});
    if (strict) strict_edges.emplace_back(u, v, k);
  };
  for (std::size_t k = 0; k < answers.size(); ++k) {
    const auto a = id(answers[k].lhs), b = id(answers[k].rhs);
    switch (answers[k].verdict) {
      case Verdict::Greater: add(a, b, k, true); break;
      case Verdict::Less: add(b, a, k, true); break;
      case Verdict::Indifferent:
        add(a, b, k, false);
        add(b, a, k, false);
        break;
      case Verdict::Unanswered: break;
    }
  }

  std::optional<std::vector<std::size_t>> best;
  for (const auto& [u, v, k] : strict_edges) {
    // Shortest path v -> u closes a cycle through the strict step u -> v.
    std::vector<std::optional<std::pair<std::size_t, std::size_t>>> prev(adj.size());
    std::vector<bool> seen(adj.size(), false);
    std::deque<std::size_t> q{v};
    seen[v] = true;
    while (!q.empty() && !seen[u]) {
      const auto x = q.front();
      q.pop_front();
      for (const auto& e : adj[x])
        if (!seen[e.to]) {
          seen[e.to] = true;
          prev[e.to] = {{x, e.answer}};
          q.push_back(e.to);
        }
    }
    if (!seen[u]) continue;
    std::vector<std::size_t> cycle{k};
    for (auto x = u; x != v; x = prev[x]->first) cycle.push_back(prev[x]->second);
    if (!best || cycle.size() < best->size()) best = cycle;
  }
  if (!best) return std::nullopt;

  Inconsistency inc;
  inc.kind = "transitivity-cycle";
  inc.message = "answers form a preference cycle with a strict step";
  std::uint64_t last = 0;
  Json seq_list = Json::array();
  for (auto k : *best) {
    inc.witness.queries.push_back({answers[k].lhs, answers[k].rhs, answers[k].verdict});
    seq_list.push_back(seqs[k]);
    last = std::max(last, seqs[k]);
  }
  inc.witness.params = {{"answer_seqs", seq_list}};
  inc.witness.explanation = "following the answers around the cycle returns to the start with a strict preference";
  inc.requery_seq = last;
  return inc;
}

Session Session::create(std::string id, SessionConfig config, std::string timestamp) {
  if (config.alphabet.empty()) throw std::invalid_argument("session needs a non-empty alphabet");
  if (!(config.epsilon > 0 && config.epsilon <= 1)) throw std::invalid_argument("epsilon must lie in (0,1]");
  if (config.query_budget && *config.query_budget == 0) throw design::QueryBudgetExceeded("query budget of 0");
  Session s;
  s.id_ = std::move(id);
  s.config_ = config;
  LogRecord r;
  r.kind = LogRecord::Kind::Create;
  r.seq = 0;
  r.timestamp = std::move(timestamp);
  r.config = std::move(config);
  s.log_.push_back(std::move(r));
  s.rebuild();
  return s;
}

Session Session::restore(std::string id, const std::vector<LogRecord>& log) {
  if (log.empty() || log.front().kind != LogRecord::Kind::Create)
    throw std::invalid_argument("session log must start with a create record");
  Session s;
  s.id_ = std::move(id);
  s.config_ = *log.front().config;
  s.log_ = log;
  s.rebuild();
  return s;
}

void Session::rebuild() {
  // Later queries depend on earlier answers, so withdrawing an answer also
  // withdraws everything answered after it.
  effective_.clear();
  effective_seq_.clear();
  for (const auto& r : log_) {
    if (r.kind == LogRecord::Kind::Answer) {
      effective_.push_back({*r.lhs, *r.rhs, r.verdict});
      effective_seq_.push_back(r.seq);
    } else if (r.kind == LogRecord::Kind::Retract) {
      auto it = std::find(effective_seq_.begin(), effective_seq_.end(), r.retracts);
      if (it == effective_seq_.end()) throw std::invalid_argument("retract record names an inactive answer");
      const auto k = it - effective_seq_.begin();
      effective_.erase(effective_.begin() + k, effective_.end());
      effective_seq_.erase(it, effective_seq_.end());
    }
  }
  advance();
}

void Session::advance() {
  status_ = SessionStatus::Computing;
  pending_.reset();
  design_.reset();
  inconsistency_.reset();
  error_.clear();

  if (auto cycle = find_transitivity_cycle(effective_, effective_seq_)) {
    inconsistency_ = std::move(*cycle);
    status_ = SessionStatus::Inconsistent;
    return;
  }

  const std::optional<std::uint64_t> last =
      effective_seq_.empty() ? std::nullopt : std::optional<std::uint64_t>(effective_seq_.back());
  auto inconsistent = [&](std::string kind, std::string message, axiom::Witness w) {
    inconsistency_ = Inconsistency{std::move(kind), std::move(message), std::move(w), last};
    status_ = SessionStatus::Inconsistent;
  };

  ReplayOracle oracle(config_.alphabet, effective_);
  design::DesignOptions opt;
  opt.epsilon = config_.epsilon;
  opt.query_budget = config_.query_budget;
  opt.reference_scale = false;
  try {
    design_ = design::design_reward(oracle, opt);
    status_ = SessionStatus::Complete;
  } catch (const design::IncompleteOracle&) {
    if (!oracle.pending()) throw;
    pending_ = oracle.pending();
    status_ = SessionStatus::AwaitingAnswer;
  } catch (const design::ContinuityFailure& e) {
    inconsistent("continuity", e.what(), e.witness);
  } catch (const design::DiscountOutOfRange& e) {
    axiom::Witness w;
    w.params = {{"transition", config_.alphabet.name(e.transition)}, {"gamma", e.gamma}};
    w.explanation = e.what();
    inconsistent("discount-range", e.what(), std::move(w));
  } catch (const std::domain_error& e) {
    axiom::Witness w;
    w.explanation = e.what();
    inconsistent("not-markov", e.what(), std::move(w));
  } catch (const design::QueryBudgetExceeded& e) {
    error_ = e.what();
    status_ = SessionStatus::Failed;
  }
}

const LogRecord& Session::answer(Verdict v, std::string timestamp) {
  if (status_ != SessionStatus::AwaitingAnswer || !pending_)
    throw SessionStateError("session " + id_ + " has no pending query (status " + std::string(to_string(status_)) + ")");
  if (v == Verdict::Unanswered) throw std::invalid_argument("an answer must be strictly-less, indifferent or strictly-greater");
  LogRecord r;
  r.kind = LogRecord::Kind::Answer;
  r.seq = log_.back().seq + 1;
  r.timestamp = std::move(timestamp);
  r.lhs = pending_->first;
  r.rhs = pending_->second;
  r.verdict = v;
  log_.push_back(std::move(r));
  rebuild();
  return log_.back();
}

const LogRecord& Session::requery(std::optional<std::uint64_t> seq, std::string timestamp) {
  if (status_ != SessionStatus::Inconsistent || !inconsistency_ || !inconsistency_->requery_seq)
    throw SessionStateError("session " + id_ + " has nothing to re-query");
  const auto target = seq.value_or(*inconsistency_->requery_seq);
  if (std::find(effective_seq_.begin(), effective_seq_.end(), target) == effective_seq_.end())
    throw std::invalid_argument("answer " + std::to_string(target) + " is not an active answer of session " + id_);
  LogRecord r;
  r.kind = LogRecord::Kind::Retract;
  r.seq = log_.back().seq + 1;
  r.timestamp = std::move(timestamp);
  r.retracts = target;
  log_.push_back(std::move(r));
  rebuild();
  return log_.back();
}

Json Session::result() const {
  if (status_ == SessionStatus::Complete) return session_result_json(design_, {}, config_.alphabet);
  if (status_ == SessionStatus::Inconsistent) return session_result_json(std::nullopt, {*inconsistency_}, config_.alphabet);
  throw SessionStateError("session " + id_ + " has no result yet (status " + std::string(to_string(status_)) + ")");
}

Json render_lottery(const Lottery& l, const Alphabet& alphabet) {
  Json out = Json::array();
  for (const auto& [h, w] : l.support()) {
    char odds[32];
    std::snprintf(odds, sizeof odds, "%.2f%%", 100.0 * w.to_double());
    out.push_back({{"outcome", to_string(h, alphabet)}, {"odds", odds}, {"weight", w.str()}});
  }
  return out;
}

Json Session::pending_json() const {
  if (!pending_) return nullptr;
  const auto& [a, b] = *pending_;
  return {{"seq", log_.back().seq + 1},
          {"lhs", to_json(a)},
          {"rhs", to_json(b)},
          {"rendering", {{"lhs", render_lottery(a, config_.alphabet)}, {"rhs", render_lottery(b, config_.alphabet)}}}};
}

Json Session::view() const {
  Json j = {{"id", id_},
            {"status", std::string(to_string(status_))},
            {"config", config_json(config_)},
            {"answered", effective_.size()},
            {"log_length", log_.size()},
            {"pending_query", pending_json()}};
  if (status_ == SessionStatus::Complete || status_ == SessionStatus::Inconsistent) j["result"] = result();
  if (inconsistency_) j["inconsistency"] = inconsistency_json(*inconsistency_, config_.alphabet);
  if (!error_.empty()) j["error"] = error_;
  return j;
}

}  // namespace rewardkit::service
