#include "dynmatch/params.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dynmatch {

using BigInt = boost::multiprecision::cpp_int;

namespace {

BigInt big_pow(std::int64_t base, int exp) {
  BigInt r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

std::string fmt(double x) {
  std::ostringstream o;
  o.precision(6);
  o << x;
  return o.str();
}

}  // namespace

double Params::general_ratio_bound(const Rational& eps_dm) const {
  if (!h2_defined || h2 <= 0) return std::numeric_limits<double>::infinity();
  return (2.0 / h2) * (1.0 + eps_value()) * (1.0 + eps_dm.value());
}

Params derive_params(std::size_t n, const Rational& eps, const ParamOverrides& ov) {
  if (!(eps.num > 0 && eps.num < eps.den)) throw std::invalid_argument("eps must lie in (0,1)");
  if (n < 2) throw std::invalid_argument("n must be at least 2");

  Params p;
  p.n = n;
  p.eps = eps;
  const std::int64_t q = eps.den;
  const std::int64_t e = eps.num;
  p.alpha = Rational(q + 3 * e, q);
  p.beta = Rational(q + e, q);
  const std::int64_t a1 = q + 3 * e;
  const std::int64_t b1 = q + e;
  const double ev = eps.value();

  // L = ceil(log_beta(n/alpha)): smallest L with b1^L * a1 >= n * q^(L+1).
  {
    int L = 0;
    while (big_pow(b1, L) * a1 < BigInt(n) * big_pow(q, L + 1)) ++L;
    p.L = L < 1 ? 1 : L;
  }
  const int L = p.L;
  const std::int64_t L4 = std::int64_t(L) * L * L * L;

  p.skel_target = ov.skel_target.value_or(Rational(L4, 1));
  if (p.skel_target.num <= 0) throw std::invalid_argument("skel_target must be positive");
  p.gamma = ov.gamma ? ov.gamma->value() : ev;
  p.delta = ov.delta ? ov.delta->value() : ev * ev * ev / double(L4);
  if (ov.k_h) p.k_h = *ov.k_h;

  // d_i = b1^(i+1) * a1 / q^(i+2).
  auto d_num = [&](int i) { return big_pow(b1, i + 1) * a1; };
  auto d_den = [&](int i) { return big_pow(q, i + 2); };
  const BigInt s_num = p.skel_target.num;
  const BigInt s_den = p.skel_target.den;

  // L' = ceil(log_beta(2 s / (alpha beta))), clamped at 0.
  {
    int k = 0;
    while (k <= L + 1 && d_num(k) * s_den < 2 * s_num * d_den(k)) ++k;
    p.Lprime = k;
  }

  p.levels.resize(static_cast<std::size_t>(L) + 1);
  for (int i = 0; i <= L; ++i) {
    auto& lc = p.levels[static_cast<std::size_t>(i)];
    lc.index = i;
    lc.d = std::pow(p.beta.value(), i) * p.alpha.value() * p.beta.value();
    lc.skeleton = p.has_skeleton(i);
    if (lc.skeleton) {
      int k = 0;
      while ((BigInt(1) << k) * s_num * d_den(i) < d_num(i) * s_den) ++k;
      lc.layers = k;
      lc.lambda = lc.d / (std::ldexp(1.0, k) * p.skel_target.value());
    }
  }

  p.h0 = std::exp(-p.gamma) / (1.0 + 4 * ev);
  const double ab = p.alpha.value() * p.beta.value();
  p.h1 = p.h0 * std::exp(-p.gamma) * (1.0 / ab - 3 * ev);
  const double budget = 1.0 - 32.0 * p.delta * double(L4) / (ev * ev);
  const double slack = p.h1 - ev - 1.0 / p.k_h;
  p.h2 = budget * slack;
  // Two negative factors multiply to a positive h2 that means nothing.
  p.h2_defined = budget > 0 && slack > 0;

  auto require = [&](bool ok, const std::string& what) {
    if (!ok) p.failed_preconditions.push_back(what);
  };
  const double Ld = double(L);
  require(std::floor(double(L4) / 2) >= double(L4) / 4 && double(L4) / 4 >= 1.0 / ev,
          "floor(L^4/2) >= L^4/4 >= 1/eps");
  require(p.delta > 0 && p.delta < 0.5, "0 < delta < 1/2");
  require(Ld * Ld >= 4.0 / ev, "L^2 >= 4/eps");
  require(Ld >= 3 * ab, "L >= 3 alpha beta");
  require(L >= 3, "L >= 3");
  for (const auto& lc : p.levels) {
    if (!lc.skeleton) continue;
    const std::string tag = " (level " + std::to_string(lc.index) + ")";
    const double ld = lc.layers;
    require(lc.layers <= L, "L_d <= L" + tag);
    require(ld >= p.gamma, "L_d >= gamma" + tag);
    require(Ld >= 4 * ld / p.gamma, "L >= 4 L_d / gamma" + tag);
    require(Ld * Ld >= 8 * std::exp(p.gamma) * ld / (ev * p.gamma * lc.lambda),
            "L^2 >= 8 e^gamma L_d / (eps gamma lambda_d)" + tag);
    require(lc.lambda >= 0.5 && lc.lambda <= 1.0, "1/2 <= lambda_d <= 1" + tag);
  }
  require(p.h0 >= 0.5 && p.h0 <= 1.0 / (1 + 4 * ev),
          "1/2 <= h0 <= 1/(1+4 eps) (h0=" + fmt(p.h0) + ")");
  require(p.h2_defined && p.h2 > 0, "h2 > 0 with both factors positive (h2=" + fmt(p.h2) + ")");
  p.preconditions_ok = p.failed_preconditions.empty();

  if (ov.skel_target && !(p.skel_target == Rational(L4, 1))) {
    p.deviation_flags.push_back("skel_target=" + p.skel_target.str() + " (default L^4=" +
                                std::to_string(L4) + ")");
  }
  if (ov.gamma && p.gamma != ev) p.deviation_flags.push_back("gamma=" + ov.gamma->str());
  if (ov.delta && p.delta != ev * ev * ev / double(L4)) {
    p.deviation_flags.push_back("delta=" + ov.delta->str());
  }
  return p;
}

}  // namespace dynmatch
