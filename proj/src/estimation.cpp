#include "ifibf/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include "ifibf/csv.hpp"
#include "ifibf/error.hpp"

namespace ifibf {

GaussianPosterior posterior_update(double mu_0, double var_0, double xbar, std::uint64_t n,
                                   double sigma2) {
  if (var_0 <= 0.0) throw InvalidParameter("posterior_update: prior variance must be > 0");
  if (sigma2 <= 0.0) throw InvalidParameter("posterior_update: likelihood variance must be > 0");

  GaussianPosterior post;
  post.mu_0 = mu_0;
  post.var_0 = var_0;
  post.likelihood_var = sigma2;
  post.obs_count = n;
  if (n == 0) {  // no data: the posterior is the prior
    post.mu_n = mu_0;
    post.var_n = var_0;
    return post;
  }
  post.var_n = 1.0 / (static_cast<double>(n) / sigma2 + 1.0 / var_0);
  post.mu_n = post.var_n * (mu_0 / var_0 + static_cast<double>(n) * xbar / sigma2);
  return post;
}

NameEstimator::NameEstimator(int levels, EstimatorConfig config)
    : levels_(levels), config_(config) {
  if (levels < 1) throw InvalidParameter("estimator: need at least one level");
  if (config.var_floor <= 0.0) throw InvalidParameter("estimator: variance floor must be > 0");
  if (config.prior_var <= 0.0) throw InvalidParameter("estimator: prior variance must be > 0");
  field_presence_.resize(static_cast<std::size_t>(levels));
  raw_counts_.resize(static_cast<std::size_t>(levels));
}

std::string NameEstimator::level_key(const HierarchicalName& name, int level) const {
  return ifibf::level_key(name, level, levels_);
}

void NameEstimator::observe_epoch(const std::vector<HierarchicalName>& names) {
  const std::uint64_t epoch = epochs_++;
  std::set<std::string> whole_seen;
  std::vector<std::set<std::string>> level_seen(static_cast<std::size_t>(levels_));

  for (const auto& name : names) {
    if (name.fields.empty()) throw ParseError("estimator: name without fields");
    const std::string whole = name.to_string();
    if (whole_seen.insert(whole).second) {
      auto& series = whole_presence_[whole];
      if (series.empty() || series.back() != epoch) series.push_back(epoch);
    }
    const int reach = std::min(name.depth(), levels_);
    for (int x = 1; x <= reach; ++x) {
      const std::string key = level_key(name, x);
      ++raw_counts_[static_cast<std::size_t>(x - 1)][key];
      if (level_seen[static_cast<std::size_t>(x - 1)].insert(key).second) {
        auto& series = field_presence_[static_cast<std::size_t>(x - 1)][key];
        if (series.empty() || series.back() != epoch) series.push_back(epoch);
      }
    }
  }
}

namespace {

// Presence series statistics over E epochs: t of them saw the key.
struct SeriesStats {
  double xbar;
  double sigma2;
};

SeriesStats presence_stats(std::uint64_t present, std::uint64_t epochs, double var_floor) {
  SeriesStats s;
  const double t = static_cast<double>(present);
  const double e = static_cast<double>(epochs);
  s.xbar = t / e;
  // Sample variance of the 0/1 series: t(E-t) / (E(E-1)).
  s.sigma2 = epochs > 1 ? t * (e - t) / (e * (e - 1.0)) : 0.0;
  s.sigma2 = std::max(s.sigma2, var_floor);
  return s;
}

}  // namespace

MethodResult NameEstimator::aggregate(EstimationMethod method, double z) const {
  if (epochs_ == 0) throw NoData("estimator: no epochs observed");

  MethodResult out;
  out.method = method;
  out.per_key.resize(static_cast<std::size_t>(levels_));

  if (method == EstimationMethod::kWholeName) {
    for (const auto& [whole, series] : whole_presence_) {
      const auto stats = presence_stats(series.size(), epochs_, config_.var_floor);
      const auto post = posterior_update(config_.prior_mu, config_.prior_var, stats.xbar,
                                         epochs_, stats.sigma2);
      const HierarchicalName name = HierarchicalName::parse(whole);
      const int reach = std::min(name.depth(), levels_);
      for (int x = 1; x <= reach; ++x) {
        auto& agg = out.per_key[static_cast<std::size_t>(x - 1)][level_key(name, x)];
        agg.mu += post.mu_n;
        agg.var += post.var_n;
        ++agg.components;
      }
    }
  } else {
    for (int x = 1; x <= levels_; ++x) {
      for (const auto& [key, series] : field_presence_[static_cast<std::size_t>(x - 1)]) {
        const auto stats = presence_stats(series.size(), epochs_, config_.var_floor);
        const auto post = posterior_update(config_.prior_mu, config_.prior_var, stats.xbar,
                                           epochs_, stats.sigma2);
        auto& agg = out.per_key[static_cast<std::size_t>(x - 1)][key];
        agg.mu = post.mu_n;
        agg.var = post.var_n;
        agg.components = 1;
      }
    }
  }

  for (int x = 1; x <= levels_; ++x) {
    LevelEstimate lvl;
    lvl.level = x;
    lvl.z = z;
    lvl.method = method;
    for (const auto& [key, agg] : out.per_key[static_cast<std::size_t>(x - 1)]) {
      lvl.mu_sum += agg.mu;
      lvl.var_sum += agg.var;
    }
    lvl.n_expected = std::max(0.0, lvl.mu_sum + z * std::sqrt(lvl.var_sum));
    out.levels.push_back(lvl);
  }
  return out;
}

MethodResult NameEstimator::estimate_whole_name(double z) const {
  return aggregate(EstimationMethod::kWholeName, z);
}

MethodResult NameEstimator::estimate_per_field(double z) const {
  return aggregate(EstimationMethod::kPerField, z);
}

std::vector<std::vector<HierarchicalName>> parse_stream(std::istream& in) {
  std::vector<std::vector<HierarchicalName>> epochs;
  std::vector<HierarchicalName> current;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (!current.empty()) epochs.push_back(std::move(current));
      current.clear();
      continue;
    }
    current.push_back(HierarchicalName::parse(line));
  }
  if (!current.empty()) epochs.push_back(std::move(current));
  if (epochs.empty()) throw NoData("stream: no names read");
  return epochs;
}

std::vector<SizedLevel> size_filter(const std::vector<LevelEstimate>& estimates, double p_target,
                                    int k) {
  if (estimates.empty()) throw InvalidParameter("size_filter: no estimates");
  std::vector<SizedLevel> out;
  for (const auto& est : estimates) {
    SizedLevel sized;
    LevelDesign& d = sized.design;
    d.level = est.level;
    d.n_ind = est.n_expected;
    d.n_prime = est.n_expected;
    d.p_ind = p_target;
    d.k_ideal = k;
    d.k_ind = k;
    if (est.n_expected <= 0.0) {
      sized.degenerate = true;
      d.m_ideal = 2.0;
      d.m_ind = 2;
    } else {
      d.m_ideal = static_cast<double>(k) * est.n_expected / -std::log(p_target);
      d.m_ind = positions_for(est.n_expected, p_target, k);
    }
    d.f_ideal = std::pow(1.0 - p_target, static_cast<double>(k));
    d.f_ind = d.f_ideal;
    out.push_back(sized);
  }
  return out;
}

void write_estimates_csv(std::ostream& out, const std::vector<MethodResult>& results) {
  out << "level,method,mu,sigma2,z,n_expected\n";
  for (const auto& result : results) {
    const char* tag = result.method == EstimationMethod::kWholeName ? "I" : "II";
    for (const auto& lvl : result.levels) {
      out << lvl.level << ',' << tag << ',' << csv_number(lvl.mu_sum) << ','
          << csv_number(lvl.var_sum) << ',' << csv_number(lvl.z) << ','
          << csv_number(lvl.n_expected) << '\n';
    }
  }
}

}  // namespace ifibf
