#include "rewardkit/lottery/lottery.hpp"

#include <stdexcept>

namespace rewardkit {

namespace {

void add_weight(Lottery::Support& s, const History& h, const Rational& w) {
  if (w.is_zero()) return;
  auto [it, inserted] = s.try_emplace(h, w);
  if (!inserted) it->second += w;
}

void check_normalized(const Lottery::Support& s) {
  Rational total;
  for (const auto& [h, w] : s) {
    if (w <= Rational(0)) throw std::invalid_argument("lottery weights must be positive");
    total += w;
  }
  if (total != Rational(1)) throw std::invalid_argument("lottery weights sum to " + total.str() + ", expected 1/1");
}

}  // namespace

Lottery::Lottery() { support_.emplace(History{}, Rational(1)); }

Lottery Lottery::dirac(History h) {
  Support s;
  s.emplace(std::move(h), Rational(1));
  return Lottery(std::move(s));
}

Lottery Lottery::from_weights(const std::vector<std::pair<History, Rational>>& weights) {
  Support s;
  for (const auto& [h, w] : weights) {
    if (w.is_negative()) throw std::invalid_argument("negative lottery weight");
    add_weight(s, h, w);
  }
  check_normalized(s);
  return Lottery(std::move(s));
}

Rational Lottery::weight(const History& h) const {
  auto it = support_.find(h);
  return it == support_.end() ? Rational(0) : it->second;
}

Rational Lottery::mass_with_prefix(const History& prefix) const {
  Rational m;
  for (const auto& [h, w] : support_)
    if (h.has_prefix(prefix)) m += w;
  return m;
}

double Lottery::expectation(const std::function<double(const History&)>& f) const {
  double acc = 0.0;
  for (const auto& [h, w] : support_) acc += w.to_double() * f(h);
  return acc;
}

void Lottery::require_alphabet(const Alphabet& alphabet) const {
  for (const auto& [h, w] : support_)
    for (const auto& t : h.steps()) alphabet.require(t);
}

Lottery mix(const Rational& p, const Lottery& a, const Lottery& b) {
  if (p < Rational(0) || p > Rational(1)) throw std::invalid_argument("mixture weight " + p.str() + " outside [0,1]");
  if (p == Rational(1)) return a;
  if (p.is_zero()) return b;
  const Rational q = Rational(1) - p;
  std::vector<std::pair<History, Rational>> ws;
  ws.reserve(a.size() + b.size());
  for (const auto& [h, w] : a.support()) ws.emplace_back(h, p * w);
  for (const auto& [h, w] : b.support()) ws.emplace_back(h, q * w);
  return Lottery::from_weights(ws);
}

Lottery prepend(const Transition& t, const Lottery& a) {
  std::vector<std::pair<History, Rational>> ws;
  ws.reserve(a.size());
  for (const auto& [h, w] : a.support()) ws.emplace_back(h.prepended(t), w);
  return Lottery::from_weights(ws);
}

Lottery prepend(const Alphabet& alphabet, const Transition& t, const Lottery& a) {
  alphabet.require(t);
  a.require_alphabet(alphabet);
  return prepend(t, a);
}

Lottery prepend(const History& prefix, const Lottery& a) {
  std::vector<std::pair<History, Rational>> ws;
  ws.reserve(a.size());
  for (const auto& [h, w] : a.support()) ws.emplace_back(concat(prefix, h), w);
  return Lottery::from_weights(ws);
}

Lottery redirect(const Lottery& c, const History& prefix, const Lottery& b) {
  std::vector<std::pair<History, Rational>> ws;
  Rational moved;
  for (const auto& [h, w] : c.support()) {
    if (h.has_prefix(prefix))
      moved += w;
    else
      ws.emplace_back(h, w);
  }
  if (moved.is_zero()) return c;
  for (const auto& [h, w] : b.support()) ws.emplace_back(concat(prefix, h), moved * w);
  return Lottery::from_weights(ws);
}

double lottery_utility(const Lottery& a, const std::function<double(const History&)>& u) {
  return a.expectation(u);
}

}  // namespace rewardkit
