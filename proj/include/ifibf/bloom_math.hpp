#pragma once

#include <cstdint>
#include <vector>

#include "ifibf/geometry.hpp"

namespace ifibf {

// Parameters of a standard m-bit, k-hash filter. The five quantities are
// tied together by p = e^(-k*n/m) and f = (1-p)^k.
struct StandardBloomParams {
  std::uint64_t m = 0;  // bit positions
  std::uint64_t n = 0;  // design capacity (elements)
  int k = 1;            // hash functions
  double p = 0.0;       // probability a bit is still 0 at design load
  double f = 0.0;       // false-positive probability at design load
};

// Design of one level of an iterated stack. Ideal values are the
// real-valued solutions of the design equations; m_ind / k_ind are the
// integer counts a concrete filter uses, with f_ind recomputed from them.
struct LevelDesign {
  int level = 1;          // x, 1-based
  double n_ind = 0.0;     // expected distinct elements at this level
  double n_prime = 0.0;   // repetition-adjusted count, n' <= n
  double p_ind = 0.0;     // target probability a bit stays 0
  double k_ideal = 1.0;   // real-valued hash count
  int k_ind = 1;          // rounded hash count, >= 1
  double m_ideal = 0.0;   // real-valued positions
  std::uint64_t m_ind = 0;  // integer positions (rounded up)
  double f_ideal = 0.0;   // false positives from the ideal values
  double f_ind = 0.0;     // false positives from the integer values
};

struct SplitDesign {
  FilterGeometry geometry;
  std::vector<LevelDesign> levels;
  double f_overall = 0.0;  // product of per-level f_ideal
};

// Capacity of an (m, k) filter at target p: n = floor(-m ln p / k).
StandardBloomParams design_standard(std::uint64_t m, double p, int k);

// Split an (m, k) design into d levels of m/d positions and k/d hashes
// each. Rejects d that does not divide k. Seeds for the geometry are
// derived from base_seed.
SplitDesign split_to_iterated(const StandardBloomParams& std_params, int d,
                              std::uint64_t base_seed = 0);

// False-positive probability of an (m, k) filter holding n_actual
// elements, from the expectation formula (1 - e^(-k*n/m))^k. n_actual may
// exceed the design capacity; the rate simply rises.
double effective_fpr(double m, double k, double n_actual);
double effective_fpr(const StandardBloomParams& params, double n_actual);
double effective_fpr(const LevelDesign& level, double n_actual);

// Overall rate of a stack: product of per-level rates at the given loads.
double effective_fpr_overall(const std::vector<LevelDesign>& levels,
                             const std::vector<double>& n_actual);

// Strategy I: shrink positions in proportion to the repetition-adjusted
// count, m' = m * n'/n, keeping k and p. Preserves the false-positive
// probability while releasing memory.
LevelDesign strategy_one_shrink(const LevelDesign& level);

// Strategy II: keep m, rehash with k' = -(m/n') ln p. Lowers the
// false-positive probability at unchanged memory. f_ind uses the rounded
// k', f_ideal the fractional one.
LevelDesign strategy_two_rehash(const LevelDesign& level);

// Positions needed for n expected elements at target p: m = ceil(k*n / -ln p).
std::uint64_t positions_for(double n_expected, double p_target, int k);

// Level design at a repetition percentage: n' = (1 - repetition) * n.
LevelDesign level_with_repetition(const LevelDesign& level, double repetition_fraction);

}  // namespace ifibf
