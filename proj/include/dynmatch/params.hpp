#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dynmatch/common.hpp"

namespace dynmatch {

/// Per-level constants of the (alpha, beta)-partition. `layers` (the number of
/// halving steps) and `lambda` are only meaningful when `skeleton` is set.
struct LevelConfig {
  int index = 0;
  double d = 0;       // degree threshold beta^i * alpha * beta
  int layers = 0;     // ceil(log2(d / skel_target))
  double lambda = 1;  // 2^layers = d / (lambda * skel_target)
  bool skeleton = false;
};

struct ParamOverrides {
  std::optional<Rational> gamma;
  std::optional<Rational> delta;
  std::optional<Rational> skel_target;
  std::optional<int> k_h;
};

struct Params {
  std::size_t n = 0;
  Rational eps;
  Rational alpha;
  Rational beta;
  int L = 1;
  double gamma = 0;
  double delta = 0;
  Rational skel_target;  // defaults to L^4
  int Lprime = 0;        // first level that carries a skeleton
  int k_h = 1000;
  double h0 = 0;
  double h1 = 0;
  double h2 = 0;
  bool h2_defined = false;  // both factors of h2 positive
  std::vector<LevelConfig> levels;  // index 0..L

  bool preconditions_ok = false;
  std::vector<std::string> failed_preconditions;
  std::vector<std::string> deviation_flags;

  double eps_value() const { return eps.value(); }
  double d(int i) const { return levels[static_cast<std::size_t>(i)].d; }
  double L2() const { return double(L) * L; }
  double L4() const { return L2() * L2(); }
  bool has_skeleton(int i) const { return i >= Lprime && i <= L; }

  /// (2/h2)(1+eps)(1+eps_dm): the guarantee for the maintained matching on
  /// general graphs. Infinite unless h2 is defined and positive.
  double general_ratio_bound(const Rational& eps_dm) const;
};

/// Closed-form parameter derivation. Never throws for 0<eps<1, n>=2; failed
/// parameter inequalities are listed in `failed_preconditions`.
Params derive_params(std::size_t n, const Rational& eps, const ParamOverrides& overrides = {});

}  // namespace dynmatch
