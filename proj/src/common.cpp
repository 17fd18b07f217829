#include "dynmatch/common.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace dynmatch {

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::invalid_argument("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  num = g ? n / g : n;
  den = g ? d / g : d;
}

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

namespace {

std::int64_t parse_int(std::string_view t, std::string_view whole) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) {
    throw std::invalid_argument("not a rational: '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Rational(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto whole = text.substr(0, dot);
    const auto frac = text.substr(dot + 1);
    if (frac.size() > 15) throw std::invalid_argument("too many decimals: '" + std::string(text) + "'");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const bool neg = !whole.empty() && whole.front() == '-';
    const std::int64_t w = whole.empty() || whole == "-" ? 0 : parse_int(whole, text);
    const std::int64_t f = frac.empty() ? 0 : parse_int(frac, text);
    const std::int64_t mag = (w < 0 ? -w : w) * den + f;
    return Rational(neg ? -mag : mag, den);
  }
  return Rational(parse_int(text, text), 1);
}

void AuditReport::fail(const std::string& clause, std::string witness) {
  ++clauses_[clause];
  violations_.push_back({clause, std::move(witness)});
}

void AuditReport::merge(const AuditReport& other, const std::string& prefix) {
  for (const auto& [c, k] : other.clauses_) clauses_[prefix + c] += k;
  for (const auto& v : other.violations_) violations_.push_back({prefix + v.clause, v.witness});
}

std::size_t AuditReport::count(const std::string& clause) const {
  auto it = clauses_.find(clause);
  return it == clauses_.end() ? 0 : it->second;
}

std::string AuditReport::summary(std::size_t max_items) const {
  if (passed()) return "pass (" + std::to_string(clauses_.size()) + " clauses)";
  std::ostringstream out;
  out << violations_.size() << " violation(s):";
  for (std::size_t i = 0; i < violations_.size() && i < max_items; ++i) {
    out << "\n  " << violations_[i].clause << ": " << violations_[i].witness;
  }
  return out.str();
}

WorkCounters& WorkCounters::operator+=(const WorkCounters& o) {
  edge_touches += o.edge_touches;
  level_moves += o.level_moves;
  split_calls += o.split_calls;
  rebuild_calls += o.rebuild_calls;
  revamp_calls += o.revamp_calls;
  post_rebuild_cleanups += o.post_rebuild_cleanups;
  matcher_rebuilds += o.matcher_rebuilds;
  kernel_rescans += o.kernel_rescans;
  residual_repairs += o.residual_repairs;
  return *this;
}

}  // namespace dynmatch
