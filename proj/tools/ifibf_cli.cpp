// Experiment harness: parameter design, analytic table/figure series,
// stream estimation and end-to-end forwarding simulation, all as CSV.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "ifibf/bloom_math.hpp"
#include "ifibf/csv.hpp"
#include "ifibf/error.hpp"
#include "ifibf/estimation.hpp"
#include "ifibf/experiments.hpp"
#include "ifibf/sim.hpp"

namespace {

struct GlobalOpts {
  std::string case_name = "I";
  std::string output;  // empty = stdout
  std::uint64_t seed = 1;
  bool monte_carlo = false;
  std::uint64_t mc_queries = 100000;
};

// Writes to --output or stdout.
void emit(const GlobalOpts& opts, const std::string& text) {
  if (opts.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.output, std::ios::binary);
  if (!out) throw ifibf::Error("cannot open output file '" + opts.output + "'");
  out << text;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ifibf::Error("cannot open input file '" + path + "'");
  return in;
}

void add_design(CLI::App& app, GlobalOpts& opts) {
  auto* cmd = app.add_subcommand("design", "Filter parameters for (m, p, k), optionally split");
  auto m = std::make_shared<std::uint64_t>(1 << 17);
  auto p = std::make_shared<double>(0.5);
  auto k = std::make_shared<int>(4);
  auto d = std::make_shared<int>(1);
  cmd->add_option("--m", *m, "Filter bits");
  cmd->add_option("--p", *p, "Target probability a bit stays 0");
  cmd->add_option("--k", *k, "Hash functions");
  cmd->add_option("--d", *d, "Levels to split into (must divide k)");
  cmd->callback([&opts, m, p, k, d]() {
    const auto params = ifibf::design_standard(*m, *p, *k);
    std::ostringstream out;
    out << "quantity,value\n";
    out << "m," << params.m << "\n";
    out << "n," << params.n << "\n";
    out << "k," << params.k << "\n";
    out << "p," << ifibf::csv_number(params.p) << "\n";
    out << "f," << ifibf::csv_number(params.f) << "\n";
    out << "address_bits," << ifibf::address_bits(params.m) << "\n";
    if (*d > 1) {
      const auto split = ifibf::split_to_iterated(params, *d);
      out << "levels," << *d << "\n";
      out << "m_ind," << split.levels.front().m_ind << "\n";
      out << "k_i," << split.levels.front().k_ind << "\n";
      out << "f_ind," << ifibf::csv_number(split.levels.front().f_ind) << "\n";
      out << "f_overall," << ifibf::csv_number(split.f_overall) << "\n";
      out << "level_address_bits," << split.geometry.level_address_bits(1) << "\n";
      out << "name_bits," << ifibf::ibf_name_bits(split.geometry) << "\n";
    }
    emit(opts, out.str());
  });
}

void add_table3(CLI::App& app, GlobalOpts& opts) {
  auto* cmd = app.add_subcommand("table3", "False positives under the repetition example grid");
  cmd->callback([&opts]() {
    const auto rows = opts.monte_carlo
                          ? ifibf::table3_rows_monte_carlo(opts.seed, opts.mc_queries)
                          : ifibf::table3_rows();
    std::ostringstream out;
    ifibf::write_csv(out, rows);
    emit(opts, out.str());
  });
}

void add_series(CLI::App& app, GlobalOpts& opts) {
  auto max_hashes = std::make_shared<int>(12);

  auto* naming = app.add_subcommand("naming-bits", "Name payload bits per scheme and hash count");
  naming->add_option("--max-hashes", *max_hashes, "Largest per-scheme hash count");
  naming->callback([&opts, max_hashes]() {
    std::ostringstream out;
    ifibf::write_csv(out, ifibf::naming_bits_rows(ifibf::parse_case(opts.case_name), *max_hashes));
    emit(opts, out.str());
  });

  auto fixed_f = std::make_shared<std::vector<double>>();
  auto* capacity = app.add_subcommand("capacity", "Elements admitted per scheme and hash count");
  capacity->add_option("--max-hashes", *max_hashes, "Largest per-scheme hash count");
  capacity
      ->add_option("--fixed-f", *fixed_f,
                   "Emit capacity at these false-positive targets instead")
      ->expected(1, 8);
  capacity->callback([&opts, max_hashes, fixed_f]() {
    std::ostringstream out;
    const auto preset = ifibf::parse_case(opts.case_name);
    if (!fixed_f->empty())
      ifibf::write_csv(out, ifibf::fixed_fpr_rows(preset, *fixed_f));
    else
      ifibf::write_csv(out, ifibf::capacity_rows(preset, *max_hashes));
    emit(opts, out.str());
  });

  auto* fpr = app.add_subcommand("fpr", "False-positive probability per scheme and hash count");
  fpr->add_option("--max-hashes", *max_hashes, "Largest per-scheme hash count");
  fpr->callback([&opts, max_hashes]() {
    const auto preset = ifibf::parse_case(opts.case_name);
    const auto rows = opts.monte_carlo
                          ? ifibf::fpr_rows_monte_carlo(preset, *max_hashes, opts.seed,
                                                        opts.mc_queries)
                          : ifibf::fpr_rows(preset, *max_hashes);
    std::ostringstream out;
    ifibf::write_csv(out, rows);
    emit(opts, out.str());
  });

  auto max_fibs = std::make_shared<int>(10);
  auto* multi = app.add_subcommand("multi-fib", "Capacity when memory is split across tables");
  multi->add_option("--max-fibs", *max_fibs, "Largest table count");
  multi->callback([&opts, max_fibs]() {
    std::ostringstream out;
    ifibf::write_csv(out, ifibf::multi_fib_rows(ifibf::parse_case(opts.case_name), *max_fibs));
    emit(opts, out.str());
  });
}

void add_estimate(CLI::App& app, GlobalOpts& opts) {
  auto* cmd = app.add_subcommand(
      "estimate", "Per-level element estimates from an epoch stream (one name per line, "
                  "blank line between epochs)");
  auto input = std::make_shared<std::string>();
  auto levels = std::make_shared<int>(4);
  auto z = std::make_shared<double>(ifibf::kZ95);
  auto method = std::make_shared<std::string>("both");
  auto var_floor = std::make_shared<double>(1.0);
  cmd->add_option("--input", *input, "Stream file, '-' for stdin")->required();
  cmd->add_option("--levels", *levels, "Filter depth d");
  cmd->add_option("--z", *z, "Coverage multiplier (1.0/1.65/1.96/2.58 for 68/90/95/99%)");
  cmd->add_option("--method", *method, "I, II or both")
      ->check(CLI::IsMember({"I", "II", "both"}));
  cmd->add_option("--var-floor", *var_floor, "Lower bound on the likelihood variance");
  cmd->callback([&opts, input, levels, z, method, var_floor]() {
    std::vector<std::vector<ifibf::HierarchicalName>> epochs;
    if (*input == "-") {
      epochs = ifibf::parse_stream(std::cin);
    } else {
      auto in = open_input(*input);
      epochs = ifibf::parse_stream(in);
    }
    ifibf::EstimatorConfig config;
    config.var_floor = *var_floor;
    ifibf::NameEstimator estimator(*levels, config);
    for (const auto& epoch : epochs) estimator.observe_epoch(epoch);

    std::vector<ifibf::MethodResult> results;
    if (*method == "I" || *method == "both") results.push_back(estimator.estimate_whole_name(*z));
    if (*method == "II" || *method == "both") results.push_back(estimator.estimate_per_field(*z));
    std::ostringstream out;
    ifibf::write_estimates_csv(out, results);
    emit(opts, out.str());
  });
}

void add_simulate(CLI::App& app, GlobalOpts& opts) {
  auto* cmd = app.add_subcommand("simulate", "Forward an interest list over a topology");
  auto topology_path = std::make_shared<std::string>();
  auto interests_path = std::make_shared<std::string>();
  auto mode_name = std::make_shared<std::string>("filter");
  auto links_output = std::make_shared<std::string>();
  cmd->add_option("--topology", *topology_path, "Topology file")->required();
  cmd->add_option("--interests", *interests_path, "Interest file: '<node> <name>' per line")
      ->required();
  cmd->add_option("--mode", *mode_name, "filter, oracle or hierarchical")
      ->check(CLI::IsMember({"filter", "oracle", "hierarchical"}));
  cmd->add_option("--links-output", *links_output, "Also write per-link traffic CSV here");
  cmd->callback([&opts, topology_path, interests_path, mode_name, links_output]() {
    auto topo_in = open_input(*topology_path);
    const auto topology = ifibf::sim::Topology::parse(topo_in);
    auto int_in = open_input(*interests_path);
    const auto interests = ifibf::sim::parse_interests(int_in);

    ifibf::sim::FibMode mode = ifibf::sim::FibMode::kFilter;
    if (*mode_name == "oracle") mode = ifibf::sim::FibMode::kOracle;
    if (*mode_name == "hierarchical") mode = ifibf::sim::FibMode::kHierarchical;

    const auto flood = ifibf::sim::flood_adverts(topology, ifibf::sim::make_adverts(topology));
    const auto fibs = ifibf::sim::build_all_fibs(topology, flood, mode);
    ifibf::sim::SimOptions sim_opts;
    sim_opts.seed = opts.seed;
    const auto report = ifibf::sim::run_interests(topology, fibs, interests, sim_opts);
    emit(opts, report.to_csv());
    if (!links_output->empty()) {
      std::ofstream out(*links_output, std::ios::binary);
      if (!out) throw ifibf::Error("cannot open '" + *links_output + "'");
      out << report.links_csv();
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterated-filter forwarding tables: design math, estimation and simulation"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts opts;
  app.add_option("--case", opts.case_name, "Memory preset I, II or III")
      ->check(CLI::IsMember({"I", "II", "III"}));
  app.add_option("--output", opts.output, "Write CSV here instead of stdout");
  app.add_option("--seed", opts.seed, "Seed for every stochastic element");
  app.add_flag("--monte-carlo", opts.monte_carlo,
               "Overlay empirical estimates with binomial confidence bands");
  app.add_option("--mc-queries", opts.mc_queries, "Queries per Monte-Carlo estimate");

  add_design(app, opts);
  add_table3(app, opts);
  add_series(app, opts);
  add_estimate(app, opts);
  add_simulate(app, opts);

  try {
    CLI11_PARSE(app, argc, argv);
  } catch (const ifibf::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
