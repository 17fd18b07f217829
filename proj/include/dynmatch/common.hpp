#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

namespace dynmatch {

/// Exact rational with 64-bit parts; used for user-facing parameters
/// (eps, skel_target, kernel constants) so threshold arithmetic can be exact.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;

  /// Accepts "p/q", integers and finite decimals ("0.25", "1e-3" is rejected).
  static Rational parse(std::string_view text);

  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Result of an invariant audit: every violated clause with a witness.
/// `clauses` records how many violations each checked clause produced, so
/// clauses that passed appear with a zero tally.
class AuditReport {
 public:
  struct Violation {
    std::string clause;
    std::string witness;
  };

  void check(const std::string& clause) { clauses_.try_emplace(clause, 0); }
  void fail(const std::string& clause, std::string witness);
  void merge(const AuditReport& other, const std::string& prefix = {});

  bool passed() const { return violations_.empty(); }
  const std::vector<Violation>& violations() const { return violations_; }
  const std::map<std::string, std::size_t>& clauses() const { return clauses_; }
  std::size_t count(const std::string& clause) const;
  std::string summary(std::size_t max_items = 5) const;

 private:
  std::vector<Violation> violations_;
  std::map<std::string, std::size_t> clauses_;
};

/// Empirical work counters. All counts are deterministic functions of the
/// input; they stand in for asymptotic update-time claims.
struct WorkCounters {
  std::uint64_t edge_touches = 0;
  std::uint64_t level_moves = 0;
  std::uint64_t split_calls = 0;
  std::uint64_t rebuild_calls = 0;
  std::uint64_t revamp_calls = 0;
  std::uint64_t post_rebuild_cleanups = 0;
  std::uint64_t matcher_rebuilds = 0;
  std::uint64_t kernel_rescans = 0;
  std::uint64_t residual_repairs = 0;

  WorkCounters& operator+=(const WorkCounters& o);
};

}  // namespace dynmatch
