#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ifibf/bloom_math.hpp"
#include "ifibf/name.hpp"

namespace ifibf {

// Coverage multipliers for the usual confidence levels.
constexpr double kZ68 = 1.0;
constexpr double kZ90 = 1.65;
constexpr double kZ95 = 1.96;
constexpr double kZ99 = 2.58;

// Gaussian posterior of an element count under a known-variance
// likelihood:
//   var_n = (n/sigma2 + 1/var_0)^-1
//   mu_n  = var_n * (mu_0/var_0 + n*xbar/sigma2)
struct GaussianPosterior {
  double mu_n = 0.0;
  double var_n = 0.0;
  double mu_0 = 0.0;
  double var_0 = 0.0;
  double likelihood_var = 0.0;
  std::uint64_t obs_count = 0;
};

GaussianPosterior posterior_update(double mu_0, double var_0, double xbar, std::uint64_t n,
                                   double sigma2);

struct EstimatorConfig {
  double prior_mu = 0.0;
  double prior_var = 1e6;     // wide prior when the data distribution is unknown
  double var_floor = 1.0;     // lower bound on the sample variance used as sigma2
};

// What one epoch contributed to a structure key.
struct Observation {
  std::uint64_t epoch = 0;
  std::map<std::string, std::uint64_t> counts;  // key -> occurrences in the epoch
};

enum class EstimationMethod { kWholeName, kPerField };

// One per-level sizing figure: n_expected = sum(mu) + z * sqrt(sum(var))
// over the level's keys, clamped at zero.
struct LevelEstimate {
  int level = 1;
  double mu_sum = 0.0;
  double var_sum = 0.0;
  double z = kZ95;
  double n_expected = 0.0;
  EstimationMethod method = EstimationMethod::kPerField;
};

struct MethodResult {
  EstimationMethod method;
  std::vector<LevelEstimate> levels;  // size d
  // Per (level, prefix-key) aggregate: posterior mean/variance sums and
  // how many whole-name posteriors were folded into them (always 1 for
  // the per-field method).
  struct KeyAggregate {
    double mu = 0.0;
    double var = 0.0;
    int components = 0;
  };
  std::vector<std::map<std::string, KeyAggregate>> per_key;  // [level-1][prefix]
};

// Accumulates request epochs and estimates distinct structure keys per
// level. What is counted is key presence per epoch (the tables store set
// membership, so distinct keys drive the sizing, not request volume).
// Single writer during accumulation; freely readable after finalize.
class NameEstimator {
 public:
  NameEstimator(int levels, EstimatorConfig config = {});

  void observe_epoch(const std::vector<HierarchicalName>& names);

  std::uint64_t epoch_count() const { return epochs_; }

  // Whole-name method: one posterior per full structure, then posteriors
  // sharing a prefix key are summed into that key.
  MethodResult estimate_whole_name(double z) const;

  // Per-field method: one posterior per (level, prefix) key directly.
  MethodResult estimate_per_field(double z) const;

 private:
  // Level key of a name: the joined prefix above the level, the whole
  // name at the last level (deep names fold down).
  std::string level_key(const HierarchicalName& name, int level) const;

  MethodResult aggregate(EstimationMethod method, double z) const;

  int levels_;
  EstimatorConfig config_;
  std::uint64_t epochs_ = 0;
  // Per key: epochs in which it appeared (distinct presence series).
  std::map<std::string, std::vector<std::uint64_t>> whole_presence_;
  std::vector<std::map<std::string, std::vector<std::uint64_t>>> field_presence_;  // [level-1]
  std::vector<std::map<std::string, std::uint64_t>> raw_counts_;  // [level-1] occurrences
};

// Line-oriented stream: one name per line, a blank line ends an epoch.
// Returns the epochs as name lists. Throws NoData if nothing was read.
std::vector<std::vector<HierarchicalName>> parse_stream(std::istream& in);

// Sizes one level for the estimate: m = ceil(k * n_expected / -ln p).
// A zero estimate yields the minimal two-position filter, flagged.
struct SizedLevel {
  LevelDesign design;
  bool degenerate = false;  // estimate was zero, filter is a stub
};
std::vector<SizedLevel> size_filter(const std::vector<LevelEstimate>& estimates, double p_target,
                                    int k);

// CSV rows "level,method,mu,sigma2,z,n_expected" for one or both methods.
void write_estimates_csv(std::ostream& out, const std::vector<MethodResult>& results);

}  // namespace ifibf
