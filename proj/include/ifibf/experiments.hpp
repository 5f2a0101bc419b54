#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ifibf/bloom_math.hpp"

namespace ifibf {

// The three memory presets used throughout the experiment series
// (m is in bits, b is the address width, p fixed at 0.5).
enum class CasePreset { kI, kII, kIII };

struct CaseParams {
  std::uint64_t m = 0;
  int b = 0;
  double p = 0.5;
};

CaseParams case_params(CasePreset preset);
CasePreset parse_case(const std::string& text);  // "I" | "II" | "III"

// Four-field names at the average English word length, 8 bits per
// character: the 144-bit hierarchical reference.
constexpr double kFieldsPerName = 4.0;
constexpr double kCharsPerField = 4.5;
constexpr double kBitsPerChar = 8.0;
constexpr double kHierarchicalChars = kFieldsPerName * kCharsPerField;

// Repetition grid: three example profiles for a standard filter and its
// 2- and 4-level splits of the Case I design at k = 4.
struct Table3Row {
  std::string example;  // "I" | "II" | "III"
  std::string scheme;   // "sbf" | "2ibf" | "4ibf"
  int level = 0;        // 0 = overall
  double repetition_pct = 0.0;
  double f = 0.0;
  std::optional<double> f_mc;      // Monte-Carlo overlay
  std::optional<double> mc_sigma;  // binomial std dev of the overlay
};
std::vector<Table3Row> table3_rows();
std::vector<Table3Row> table3_rows_monte_carlo(std::uint64_t seed, std::uint64_t queries);

// Naming-bit series: bits a request carries per scheme as the per-scheme
// hash count grows, with the hierarchical reference.
struct NamingBitsRow {
  std::string scheme;
  int hashes = 0;   // k for a standard filter, k_i for the splits
  int k_total = 0;  // hashes * levels
  double bits = 0.0;
};
std::vector<NamingBitsRow> naming_bits_rows(CasePreset preset, int max_hashes);

// Capacity series: elements admitted at p = 0.5 per scheme and hash
// count; the hierarchical row is the constant m / (c * b_c).
struct CapacityRow {
  std::string scheme;
  int hashes = 0;
  int k_total = 0;
  double n = 0.0;
};
std::vector<CapacityRow> capacity_rows(CasePreset preset, int max_hashes);

// Capacity at fixed false-positive targets (the bounded-filter view):
// the hash count is the fractional k that reaches the target at p = 0.5.
struct FixedFprRow {
  double f_target = 0.0;
  std::string scheme;
  double k = 0.0;
  double n = 0.0;
};
std::vector<FixedFprRow> fixed_fpr_rows(CasePreset preset, const std::vector<double>& targets);

// False-positive series over the hash count, f = (1-p)^(total k).
struct FprRow {
  std::string scheme;
  int hashes = 0;
  int k_total = 0;
  double f = 0.0;
  std::optional<double> f_mc;
  std::optional<double> mc_sigma;
};
std::vector<FprRow> fpr_rows(CasePreset preset, int max_hashes);
std::vector<FprRow> fpr_rows_monte_carlo(CasePreset preset, int max_hashes, std::uint64_t seed,
                                         std::uint64_t queries);

// Capacity when the memory is split across several per-interface tables.
struct MultiFibRow {
  int fib_count = 1;
  std::string scheme;
  double n = 0.0;
};
std::vector<MultiFibRow> multi_fib_rows(CasePreset preset, int max_fibs);

void write_csv(std::ostream& out, const std::vector<Table3Row>& rows);
void write_csv(std::ostream& out, const std::vector<NamingBitsRow>& rows);
void write_csv(std::ostream& out, const std::vector<CapacityRow>& rows);
void write_csv(std::ostream& out, const std::vector<FixedFprRow>& rows);
void write_csv(std::ostream& out, const std::vector<FprRow>& rows);
void write_csv(std::ostream& out, const std::vector<MultiFibRow>& rows);

}  // namespace ifibf
