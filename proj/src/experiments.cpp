#include "ifibf/experiments.hpp"

#include <cmath>
#include <map>
#include <ostream>

#include "ifibf/csv.hpp"
#include "ifibf/error.hpp"
#include "ifibf/filter.hpp"
#include "ifibf/hash.hpp"
#include "ifibf/name.hpp"

namespace ifibf {

CaseParams case_params(CasePreset preset) {
  switch (preset) {
    case CasePreset::kI:
      return {std::uint64_t{1} << 17, 17, 0.5};
    case CasePreset::kII:
      return {std::uint64_t{1} << 32, 32, 0.5};
    case CasePreset::kIII:
      return {std::uint64_t{1} << 38, 38, 0.5};
  }
  throw InvalidParameter("unknown case preset");
}

CasePreset parse_case(const std::string& text) {
  if (text == "I" || text == "i" || text == "1") return CasePreset::kI;
  if (text == "II" || text == "ii" || text == "2") return CasePreset::kII;
  if (text == "III" || text == "iii" || text == "3") return CasePreset::kIII;
  throw InvalidParameter("case must be I, II or III, got '" + text + "'");
}

namespace {

constexpr int kTable3K = 4;

struct Table3Profile {
  const char* example;
  std::vector<double> repetitions;  // one fraction per level, scheme depth implied
};

const std::vector<std::pair<const char*, std::map<int, std::vector<double>>>>& table3_profiles() {
  static const std::vector<std::pair<const char*, std::map<int, std::vector<double>>>> profiles =
      {
          {"I", {{1, {0.05}}, {2, {0.20, 0.05}}, {4, {0.50, 0.25, 0.10, 0.05}}}},
          {"II", {{1, {0.15}}, {2, {0.35, 0.15}}, {4, {0.60, 0.35, 0.20, 0.15}}}},
          {"III", {{1, {0.50}}, {2, {0.50, 0.50}}, {4, {0.50, 0.50, 0.50, 0.50}}}},
      };
  return profiles;
}

std::string scheme_name(int d) {
  if (d == 1) return "sbf";
  return std::to_string(d) + "ibf";
}

std::uint64_t uniform_below(std::uint64_t& state, std::uint64_t bound) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(splitmix64(state)) * bound) >> 64);
}

// Fills each level with its distinct load of uniformly hashed elements and
// measures per-level and whole-stack hit rates over fresh random queries.
struct MonteCarloFpr {
  std::vector<double> per_level;
  double overall = 0.0;
  std::uint64_t queries = 0;
};

MonteCarloFpr measure_fpr(const FilterGeometry& geometry, const std::vector<double>& loads,
                          std::uint64_t seed, std::uint64_t queries) {
  IteratedBloomFilter filter(geometry);
  std::uint64_t state = seed;
  const int d = geometry.depth();
  std::vector<std::uint32_t> positions(static_cast<std::size_t>(geometry.k_i));

  for (int x = 1; x <= d; ++x) {
    const auto count = static_cast<std::uint64_t>(std::llround(loads[static_cast<std::size_t>(x - 1)]));
    const std::uint64_t m = geometry.m_ind[static_cast<std::size_t>(x - 1)];
    for (std::uint64_t i = 0; i < count; ++i) {
      for (auto& p : positions) p = static_cast<std::uint32_t>(uniform_below(state, m));
      filter.insert_level(x, positions);
    }
  }

  std::vector<std::uint64_t> level_hits(static_cast<std::size_t>(d), 0);
  std::uint64_t joint_hits = 0;
  for (std::uint64_t q = 0; q < queries; ++q) {
    bool all = true;
    for (int x = 1; x <= d; ++x) {
      const std::uint64_t m = geometry.m_ind[static_cast<std::size_t>(x - 1)];
      for (auto& p : positions) p = static_cast<std::uint32_t>(uniform_below(state, m));
      if (filter.level_contains(x, positions))
        ++level_hits[static_cast<std::size_t>(x - 1)];
      else
        all = false;
    }
    if (all) ++joint_hits;
  }

  MonteCarloFpr out;
  out.queries = queries;
  for (int x = 0; x < d; ++x)
    out.per_level.push_back(static_cast<double>(level_hits[static_cast<std::size_t>(x)]) /
                            static_cast<double>(queries));
  out.overall = static_cast<double>(joint_hits) / static_cast<double>(queries);
  return out;
}

double binomial_sigma(double f_hat, std::uint64_t queries) {
  return std::sqrt(std::max(f_hat * (1.0 - f_hat), 0.0) / static_cast<double>(queries));
}

std::vector<Table3Row> table3_impl(bool monte_carlo, std::uint64_t seed, std::uint64_t queries) {
  const CaseParams base = case_params(CasePreset::kI);
  const StandardBloomParams std_params = design_standard(base.m, base.p, kTable3K);

  std::vector<Table3Row> rows;
  for (const auto& [example, schemes] : table3_profiles()) {
    for (const auto& [d, reps] : schemes) {
      const SplitDesign split = split_to_iterated(std_params, d);
      std::vector<double> loads;
      double overall = 1.0;
      std::vector<double> per_level;
      for (int x = 1; x <= d; ++x) {
        const auto& level = split.levels[static_cast<std::size_t>(x - 1)];
        const double n_prime =
            level.n_ind * (1.0 - reps[static_cast<std::size_t>(x - 1)]);
        loads.push_back(n_prime);
        const double f = effective_fpr(level, n_prime);
        per_level.push_back(f);
        overall *= f;
      }

      MonteCarloFpr mc;
      if (monte_carlo) mc = measure_fpr(split.geometry, loads, seed, queries);

      Table3Row overall_row;
      overall_row.example = example;
      overall_row.scheme = scheme_name(d);
      overall_row.level = 0;
      overall_row.repetition_pct = d == 1 ? reps[0] * 100.0 : 0.0;
      overall_row.f = overall;
      if (monte_carlo) {
        overall_row.f_mc = mc.overall;
        overall_row.mc_sigma = binomial_sigma(mc.overall, queries);
      }
      rows.push_back(overall_row);

      if (d == 1) continue;  // a standard filter has no per-level rows
      for (int x = 1; x <= d; ++x) {
        Table3Row row;
        row.example = example;
        row.scheme = scheme_name(d);
        row.level = x;
        row.repetition_pct = reps[static_cast<std::size_t>(x - 1)] * 100.0;
        row.f = per_level[static_cast<std::size_t>(x - 1)];
        if (monte_carlo) {
          row.f_mc = mc.per_level[static_cast<std::size_t>(x - 1)];
          row.mc_sigma = binomial_sigma(*row.f_mc, queries);
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace

std::vector<Table3Row> table3_rows() { return table3_impl(false, 0, 0); }

std::vector<Table3Row> table3_rows_monte_carlo(std::uint64_t seed, std::uint64_t queries) {
  if (queries == 0) throw InvalidParameter("table3: monte-carlo needs queries > 0");
  return table3_impl(true, seed, queries);
}

std::vector<NamingBitsRow> naming_bits_rows(CasePreset preset, int max_hashes) {
  const CaseParams params = case_params(preset);
  std::vector<NamingBitsRow> rows;
  rows.push_back({"hierarchical", 0, 0, hierarchical_name_bits(kHierarchicalChars, kBitsPerChar)});
  for (int d : {1, 2, 4}) {
    const int b_level = address_bits(params.m / static_cast<std::uint64_t>(d));
    for (int h = 1; h <= max_hashes; ++h)
      rows.push_back({scheme_name(d), h, h * d, ibf_name_bits(d, h, b_level)});
  }
  return rows;
}

std::vector<CapacityRow> capacity_rows(CasePreset preset, int max_hashes) {
  const CaseParams params = case_params(preset);
  const double m = static_cast<double>(params.m);
  std::vector<CapacityRow> rows;
  rows.push_back(
      {"hierarchical", 0, 0, m / hierarchical_name_bits(kHierarchicalChars, kBitsPerChar)});
  for (int d : {1, 2, 4})
    for (int h = 1; h <= max_hashes; ++h)
      rows.push_back({scheme_name(d), h, h * d, -m * std::log(params.p) / (h * d)});
  return rows;
}

std::vector<FixedFprRow> fixed_fpr_rows(CasePreset preset, const std::vector<double>& targets) {
  const CaseParams params = case_params(preset);
  const double m = static_cast<double>(params.m);
  std::vector<FixedFprRow> rows;
  rows.push_back({0.0, "hierarchical", 0.0,
                  m / hierarchical_name_bits(kHierarchicalChars, kBitsPerChar)});
  for (double f : targets) {
    if (!(f > 0.0 && f < 1.0))
      throw InvalidParameter("fixed-fpr: targets must lie strictly in (0,1)");
    const double k = std::log(f) / std::log(1.0 - params.p);
    const double n = -m * std::log(params.p) / k;
    for (int d : {1, 2, 4}) rows.push_back({f, scheme_name(d), k, n});
  }
  return rows;
}

std::vector<FprRow> fpr_rows(CasePreset preset, int max_hashes) {
  const CaseParams params = case_params(preset);
  std::vector<FprRow> rows;
  for (int d : {1, 2, 4})
    for (int h = 1; h <= max_hashes; ++h)
      rows.push_back({scheme_name(d), h, h * d,
                      std::pow(1.0 - params.p, static_cast<double>(h * d)),
                      std::nullopt, std::nullopt});
  return rows;
}

std::vector<FprRow> fpr_rows_monte_carlo(CasePreset preset, int max_hashes, std::uint64_t seed,
                                         std::uint64_t queries) {
  if (preset != CasePreset::kI)
    throw InvalidParameter("fpr: the monte-carlo overlay allocates real filters, case I only");
  if (queries == 0) throw InvalidParameter("fpr: monte-carlo needs queries > 0");

  const CaseParams params = case_params(preset);
  auto rows = fpr_rows(preset, max_hashes);
  for (auto& row : rows) {
    const int d = row.k_total / row.hashes;
    const StandardBloomParams std_params = design_standard(params.m, params.p, row.k_total);
    const FilterGeometry geometry =
        FilterGeometry::uniform(d, params.m / static_cast<std::uint64_t>(d), row.hashes, seed);
    const std::vector<double> loads(static_cast<std::size_t>(d),
                                    static_cast<double>(std_params.n));
    const auto mc = measure_fpr(geometry, loads, seed ^ row.k_total, queries);
    row.f_mc = mc.overall;
    row.mc_sigma = binomial_sigma(mc.overall, queries);
  }
  return rows;
}

std::vector<MultiFibRow> multi_fib_rows(CasePreset preset, int max_fibs) {
  if (max_fibs < 1) throw InvalidParameter("multi-fib: need at least one table");
  const CaseParams params = case_params(preset);
  const double m = static_cast<double>(params.m);
  std::vector<MultiFibRow> rows;
  for (int t = 1; t <= max_fibs; ++t) {
    const double m_per_fib = m / t;
    rows.push_back({t, "hierarchical",
                    m_per_fib / hierarchical_name_bits(kHierarchicalChars, kBitsPerChar)});
    const double n = -m_per_fib * std::log(params.p) / kTable3K;
    for (int d : {1, 2, 4}) rows.push_back({t, scheme_name(d), n});
  }
  return rows;
}

namespace {

std::string opt_cell(const std::optional<double>& v) { return v ? csv_number(*v) : ""; }

}  // namespace

void write_csv(std::ostream& out, const std::vector<Table3Row>& rows) {
  out << "example,scheme,level,repetition_pct,f,f_mc,mc_sigma\n";
  for (const auto& r : rows)
    out << r.example << ',' << r.scheme << ',' << r.level << ',' << csv_number(r.repetition_pct)
        << ',' << csv_number(r.f) << ',' << opt_cell(r.f_mc) << ',' << opt_cell(r.mc_sigma)
        << '\n';
}

void write_csv(std::ostream& out, const std::vector<NamingBitsRow>& rows) {
  out << "scheme,hashes,k_total,bits\n";
  for (const auto& r : rows)
    out << r.scheme << ',' << r.hashes << ',' << r.k_total << ',' << csv_number(r.bits) << '\n';
}

void write_csv(std::ostream& out, const std::vector<CapacityRow>& rows) {
  out << "scheme,hashes,k_total,n\n";
  for (const auto& r : rows)
    out << r.scheme << ',' << r.hashes << ',' << r.k_total << ',' << csv_number(r.n) << '\n';
}

void write_csv(std::ostream& out, const std::vector<FixedFprRow>& rows) {
  out << "f_target,scheme,k,n\n";
  for (const auto& r : rows)
    out << csv_number(r.f_target) << ',' << r.scheme << ',' << csv_number(r.k) << ','
        << csv_number(r.n) << '\n';
}

void write_csv(std::ostream& out, const std::vector<FprRow>& rows) {
  out << "scheme,hashes,k_total,f,f_mc,mc_sigma\n";
  for (const auto& r : rows)
    out << r.scheme << ',' << r.hashes << ',' << r.k_total << ',' << csv_number(r.f) << ','
        << opt_cell(r.f_mc) << ',' << opt_cell(r.mc_sigma) << '\n';
}

void write_csv(std::ostream& out, const std::vector<MultiFibRow>& rows) {
  out << "fib_count,scheme,n\n";
  for (const auto& r : rows)
    out << r.fib_count << ',' << r.scheme << ',' << csv_number(r.n) << '\n';
}

}  // namespace ifibf
