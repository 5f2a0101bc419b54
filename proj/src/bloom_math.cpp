#include "ifibf/bloom_math.hpp"

#include <cmath>
#include <string>

#include "ifibf/error.hpp"

namespace ifibf {

StandardBloomParams design_standard(std::uint64_t m, double p, int k) {
  if (m < 1) throw InvalidParameter("design_standard: m must be >= 1");
  if (!(p > 0.0 && p < 1.0))
    throw InvalidParameter("design_standard: p must lie strictly in (0,1), got " +
                           std::to_string(p));
  if (k < 1) throw InvalidParameter("design_standard: k must be >= 1");

  StandardBloomParams out;
  out.m = m;
  out.k = k;
  out.p = p;
  out.n = static_cast<std::uint64_t>(
      std::floor(-static_cast<double>(m) * std::log(p) / static_cast<double>(k)));
  out.f = std::pow(1.0 - p, static_cast<double>(k));
  return out;
}

SplitDesign split_to_iterated(const StandardBloomParams& std_params, int d,
                              std::uint64_t base_seed) {
  if (d < 1) throw InvalidParameter("split_to_iterated: d must be >= 1");
  if (std_params.k % d != 0)
    throw InvalidParameter("split_to_iterated: d=" + std::to_string(d) +
                           " does not divide k=" + std::to_string(std_params.k) +
                           ", per-level hash count would not be an integer");
  if (std_params.m < static_cast<std::uint64_t>(d))
    throw InvalidParameter("split_to_iterated: m must be >= d");

  const int k_i = std_params.k / d;
  const double m_level = static_cast<double>(std_params.m) / d;
  const std::uint64_t m_int = std_params.m / static_cast<std::uint64_t>(d);

  SplitDesign out;
  out.geometry = FilterGeometry::uniform(d, m_int, k_i, base_seed);
  out.f_overall = 1.0;
  for (int x = 1; x <= d; ++x) {
    LevelDesign lvl;
    lvl.level = x;
    lvl.n_ind = static_cast<double>(std_params.n);
    lvl.n_prime = lvl.n_ind;
    lvl.p_ind = std_params.p;
    lvl.k_ideal = k_i;
    lvl.k_ind = k_i;
    lvl.m_ideal = m_level;
    lvl.m_ind = m_int;
    lvl.f_ideal = std::pow(1.0 - std_params.p, static_cast<double>(k_i));
    lvl.f_ind = lvl.f_ideal;
    out.f_overall *= lvl.f_ideal;
    out.levels.push_back(lvl);
  }
  return out;
}

double effective_fpr(double m, double k, double n_actual) {
  if (n_actual < 0.0) throw InvalidParameter("effective_fpr: n_actual must be >= 0");
  if (n_actual == 0.0) return 0.0;
  const double p = std::exp(-k * n_actual / m);
  return std::pow(1.0 - p, k);
}

double effective_fpr(const StandardBloomParams& params, double n_actual) {
  return effective_fpr(static_cast<double>(params.m), static_cast<double>(params.k), n_actual);
}

double effective_fpr(const LevelDesign& level, double n_actual) {
  return effective_fpr(level.m_ideal, static_cast<double>(level.k_ind), n_actual);
}

double effective_fpr_overall(const std::vector<LevelDesign>& levels,
                             const std::vector<double>& n_actual) {
  if (levels.size() != n_actual.size())
    throw InvalidParameter("effective_fpr_overall: one load per level required");
  double f = 1.0;
  for (std::size_t i = 0; i < levels.size(); ++i) f *= effective_fpr(levels[i], n_actual[i]);
  return f;
}

LevelDesign strategy_one_shrink(const LevelDesign& level) {
  if (level.n_ind <= 0.0)
    throw InvalidParameter("strategy_one_shrink: n_ind = 0 leaves m'/n undefined");
  if (level.n_prime > level.n_ind)
    throw InvalidParameter("strategy_one_shrink: n' must not exceed n");

  LevelDesign out = level;
  out.m_ideal = level.m_ideal * level.n_prime / level.n_ind;
  out.m_ind = static_cast<std::uint64_t>(std::ceil(out.m_ideal));
  if (out.m_ind < 2) out.m_ind = 2;
  // k and p carry over unchanged, so the design-target f does too; the
  // ceil on m only pushes the realized rate below the target.
  return out;
}

LevelDesign strategy_two_rehash(const LevelDesign& level) {
  if (level.n_prime <= 0.0)
    throw InvalidParameter("strategy_two_rehash: n' must be > 0");

  LevelDesign out = level;
  out.k_ideal = -(level.m_ideal / level.n_prime) * std::log(level.p_ind);
  out.k_ind = static_cast<int>(std::lround(out.k_ideal));
  if (out.k_ind < 1) out.k_ind = 1;
  // p is held at the design target; both f values follow f' = (1-p)^k',
  // once with the fractional k' and once with the rounded one.
  out.f_ideal = std::pow(1.0 - level.p_ind, out.k_ideal);
  out.f_ind = std::pow(1.0 - level.p_ind, static_cast<double>(out.k_ind));
  return out;
}

std::uint64_t positions_for(double n_expected, double p_target, int k) {
  if (!(p_target > 0.0 && p_target < 1.0))
    throw InvalidParameter("positions_for: p must lie strictly in (0,1)");
  if (k < 1) throw InvalidParameter("positions_for: k must be >= 1");
  if (n_expected < 0.0) throw InvalidParameter("positions_for: n must be >= 0");
  const double m = static_cast<double>(k) * n_expected / -std::log(p_target);
  return static_cast<std::uint64_t>(std::ceil(m));
}

LevelDesign level_with_repetition(const LevelDesign& level, double repetition_fraction) {
  if (repetition_fraction < 0.0 || repetition_fraction > 1.0)
    throw InvalidParameter("level_with_repetition: fraction must lie in [0,1]");
  LevelDesign out = level;
  out.n_prime = level.n_ind * (1.0 - repetition_fraction);
  return out;
}

}  // namespace ifibf
