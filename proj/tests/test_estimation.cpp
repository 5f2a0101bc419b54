#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "ifibf/error.hpp"
#include "ifibf/estimation.hpp"
#include "ifibf/hash.hpp"

using namespace ifibf;

TEST_CASE("posterior with no data is the prior") {
  const auto post = posterior_update(3.0, 50.0, 0.0, 0, 4.0);
  CHECK(post.mu_n == 3.0);
  CHECK(post.var_n == 50.0);
}

TEST_CASE("posterior concentrates on the sample mean under a wide prior") {
  const auto post = posterior_update(0.0, 1e6, 5.0, 100, 4.0);
  CHECK(post.var_n == doctest::Approx(0.04).epsilon(1e-4));
  CHECK(post.mu_n == doctest::Approx(5.0).epsilon(1e-4));
}

TEST_CASE("posterior splits the difference when prior and likelihood weigh equally") {
  const auto post = posterior_update(0.0, 1e6, 7.0, 1, 1e6);
  CHECK(post.mu_n == doctest::Approx(3.5).epsilon(1e-9));
}

TEST_CASE("posterior variance follows the closed form and shrinks with data") {
  std::uint64_t state = 3;
  double previous = 1e9;
  for (std::uint64_t n = 0; n <= 64; n += 4) {
    const double sigma2 = 1.0 + static_cast<double>(splitmix64(state) % 100) / 10.0;
    const auto post = posterior_update(0.0, 1000.0, 2.0, n, 4.0);
    if (n > 0)
      CHECK(post.var_n ==
            doctest::Approx(1.0 / (static_cast<double>(n) / 4.0 + 1.0 / 1000.0)).epsilon(1e-12));
    CHECK(post.var_n <= 1000.0);
    CHECK(post.var_n <= previous);
    previous = post.var_n;
    (void)sigma2;
  }
}

TEST_CASE("posterior rejects non-positive variances") {
  CHECK_THROWS_AS(posterior_update(0.0, 0.0, 1.0, 1, 1.0), InvalidParameter);
  CHECK_THROWS_AS(posterior_update(0.0, 10.0, 1.0, 1, 0.0), InvalidParameter);
  CHECK_THROWS_AS(posterior_update(0.0, 10.0, 1.0, 1, -2.0), InvalidParameter);
}

TEST_CASE("stream parsing splits epochs on blank lines") {
  std::istringstream in("a/b\na\n\r\nc/d\n\n\ne\n");
  const auto epochs = parse_stream(in);
  REQUIRE(epochs.size() == 3);
  CHECK(epochs[0].size() == 2);
  CHECK(epochs[1][0].to_string() == "c/d");
  CHECK(epochs[2][0].to_string() == "e");

  std::istringstream empty("\n\n");
  CHECK_THROWS_AS(parse_stream(empty), NoData);
}

TEST_CASE("estimators refuse to finalize without data") {
  const NameEstimator estimator(4);
  CHECK_THROWS_AS(estimator.estimate_whole_name(kZ95), NoData);
  CHECK_THROWS_AS(estimator.estimate_per_field(kZ95), NoData);
}

namespace {

std::vector<HierarchicalName> names(const std::vector<std::string>& texts) {
  std::vector<HierarchicalName> out;
  for (const auto& t : texts) out.push_back(HierarchicalName::parse(t));
  return out;
}

}  // namespace

TEST_CASE("whole-name estimation sums posteriors that share a prefix") {
  // Structures a and a/b: at level 1 the whole-name method adds both
  // posteriors, the per-field method estimates the prefix directly.
  NameEstimator estimator(2);
  estimator.observe_epoch(names({"a", "a/b"}));
  estimator.observe_epoch(names({"a"}));
  estimator.observe_epoch(names({"a/b", "a"}));
  estimator.observe_epoch(names({"a/b"}));

  const auto whole = estimator.estimate_whole_name(kZ95);
  const auto field = estimator.estimate_per_field(kZ95);

  const auto& whole_a = whole.per_key[0].at("a");
  const auto& field_a = field.per_key[0].at("a");
  CHECK(whole_a.components == 2);
  CHECK(field_a.components == 1);
  // Summed uncertainty versus a single posterior of the same form.
  CHECK(whole_a.var == doctest::Approx(2.0 * field_a.var).epsilon(1e-9));
  CHECK(field_a.var < whole_a.var);

  // The prefix was present in every epoch, the structures individually
  // were not; the direct estimate therefore also has the smaller mean.
  CHECK(field_a.mu < whole_a.mu);
}

TEST_CASE("a single structure makes both methods coincide") {
  NameEstimator estimator(2);
  estimator.observe_epoch(names({"solo/x"}));
  estimator.observe_epoch(names({"solo/x"}));
  const auto whole = estimator.estimate_whole_name(kZ95);
  const auto field = estimator.estimate_per_field(kZ95);
  for (int x = 0; x < 2; ++x) {
    CHECK(whole.levels[x].mu_sum == doctest::Approx(field.levels[x].mu_sum).epsilon(1e-12));
    CHECK(whole.levels[x].var_sum == doctest::Approx(field.levels[x].var_sum).epsilon(1e-12));
  }
}

TEST_CASE("streams without shared prefixes give equal per-level totals") {
  NameEstimator estimator(3);
  estimator.observe_epoch(names({"a/p/1", "b/q/2", "c/r/3"}));
  estimator.observe_epoch(names({"a/p/1", "d/s/4"}));
  estimator.observe_epoch(names({"b/q/2"}));
  const auto whole = estimator.estimate_whole_name(kZ95);
  const auto field = estimator.estimate_per_field(kZ95);
  for (int x = 0; x < 3; ++x) {
    CHECK(whole.levels[x].mu_sum == doctest::Approx(field.levels[x].mu_sum).epsilon(1e-12));
    CHECK(whole.levels[x].var_sum == doctest::Approx(field.levels[x].var_sum).epsilon(1e-12));
    CHECK(whole.levels[x].n_expected ==
          doctest::Approx(field.levels[x].n_expected).epsilon(1e-12));
  }
}

TEST_CASE("shared prefixes make the per-field method strictly tighter") {
  // Half the level-1 prefixes are shared between two structures.
  NameEstimator estimator(2);
  std::uint64_t state = 17;
  for (int epoch = 0; epoch < 40; ++epoch) {
    std::vector<std::string> texts;
    for (int v = 0; v < 8; ++v) {
      const std::string prefix = "p" + std::to_string(v);
      if (splitmix64(state) % 2) texts.push_back(prefix + "/x");
      if (v < 4 && splitmix64(state) % 2) texts.push_back(prefix + "/y");
    }
    if (texts.empty()) texts.push_back("p0/x");
    estimator.observe_epoch(names(texts));
  }
  const auto whole = estimator.estimate_whole_name(kZ95);
  const auto field = estimator.estimate_per_field(kZ95);
  CHECK(field.levels[0].var_sum < whole.levels[0].var_sum);

  for (const auto& [key, whole_agg] : whole.per_key[0]) {
    const auto& field_agg = field.per_key[0].at(key);
    CHECK(field_agg.var <= whole_agg.var + 1e-12);
    if (whole_agg.components >= 2) CHECK(field_agg.var < whole_agg.var);
  }
}

TEST_CASE("per-field means track known presence rates") {
  // Keys appear independently with known per-epoch probabilities; the
  // summed posterior means must land near the expected distinct count.
  std::uint64_t state = 91;
  const std::vector<double> rates = {0.9, 0.7, 0.5, 0.3, 0.8, 0.6, 0.4, 0.95};
  NameEstimator estimator(1);
  const int epochs = 400;
  for (int e = 0; e < epochs; ++e) {
    std::vector<std::string> texts;
    for (std::size_t v = 0; v < rates.size(); ++v)
      if (static_cast<double>(splitmix64(state) % 10000) / 10000.0 < rates[v])
        texts.push_back("key" + std::to_string(v));
    if (texts.empty()) texts.push_back("key0");
    estimator.observe_epoch(names(texts));
  }
  const auto field = estimator.estimate_per_field(0.0);
  double true_sum = 0.0;
  for (double r : rates) true_sum += r;
  CHECK(std::abs(field.levels[0].mu_sum - true_sum) / true_sum < 0.10);
}

TEST_CASE("deep names fold into the last estimator level") {
  NameEstimator estimator(2);
  estimator.observe_epoch(names({"a/b/c", "a/b/d"}));
  const auto field = estimator.estimate_per_field(0.0);
  // Level 2 keys are the whole folded names, so two of them.
  CHECK(field.per_key[1].size() == 2);
  CHECK(field.per_key[0].size() == 1);
}

TEST_CASE("coverage scaling is monotone in z") {
  NameEstimator estimator(2);
  estimator.observe_epoch(names({"a/b", "c/d"}));
  estimator.observe_epoch(names({"a/b"}));
  double previous_n = -1.0;
  std::uint64_t previous_m = 0;
  for (double z : {0.0, kZ68, kZ90, kZ95, kZ99}) {
    const auto field = estimator.estimate_per_field(z);
    const auto sized = size_filter(field.levels, 0.5, 1);
    CHECK(field.levels[0].n_expected >= previous_n);
    CHECK(sized[0].design.m_ind >= previous_m);
    previous_n = field.levels[0].n_expected;
    previous_m = sized[0].design.m_ind;
  }
}

TEST_CASE("z of zero means no safety margin") {
  LevelEstimate est;
  est.level = 1;
  est.mu_sum = 100.0;
  est.var_sum = 100.0;
  est.z = 0.0;
  est.n_expected = est.mu_sum + est.z * std::sqrt(est.var_sum);
  CHECK(est.n_expected == 100.0);

  est.z = kZ95;
  est.n_expected = est.mu_sum + est.z * std::sqrt(est.var_sum);
  CHECK(est.n_expected == doctest::Approx(119.6).epsilon(1e-9));
  CHECK(std::ceil(est.n_expected) == 120.0);
}

TEST_CASE("size_filter inverts the capacity formula") {
  LevelEstimate est;
  est.level = 1;
  est.n_expected = 22713.0;
  const auto sized = size_filter({est}, 0.5, 1);
  REQUIRE(sized.size() == 1);
  CHECK(std::llabs(static_cast<long long>(sized[0].design.m_ind) - 32768) <= 1);
  CHECK_FALSE(sized[0].degenerate);
}

TEST_CASE("size_filter flags an empty level with a stub filter") {
  LevelEstimate est;
  est.level = 1;
  est.n_expected = 0.0;
  const auto sized = size_filter({est}, 0.5, 1);
  CHECK(sized[0].degenerate);
  CHECK(sized[0].design.m_ind == 2);
}

TEST_CASE("estimate csv has the documented shape") {
  NameEstimator estimator(2);
  estimator.observe_epoch(names({"a/b"}));
  std::ostringstream out;
  write_estimates_csv(out, {estimator.estimate_whole_name(kZ95),
                            estimator.estimate_per_field(kZ95)});
  const std::string text = out.str();
  CHECK(text.rfind("level,method,mu,sigma2,z,n_expected\n", 0) == 0);
  CHECK(text.find("1,I,") != std::string::npos);
  CHECK(text.find("2,II,") != std::string::npos);
}

TEST_CASE("negative estimates clamp to zero") {
  // A heavy negative prior pulls a tiny sample negative.
  EstimatorConfig config;
  config.prior_mu = -100.0;
  config.prior_var = 0.1;
  NameEstimator estimator(1, config);
  estimator.observe_epoch(names({"a"}));
  const auto field = estimator.estimate_per_field(0.0);
  CHECK(field.levels[0].n_expected == 0.0);
}
