#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ifibf/fib.hpp"
#include "ifibf/geometry.hpp"
#include "ifibf/name.hpp"

namespace ifibf::sim {

struct Link {
  int a = 0;
  int b = 0;
  double cost = 1.0;
};

// A weighted graph plus the network-wide filter geometry and the names
// each node originates. Every node shares the geometry; positions are
// computed once at the request source.
struct Topology {
  std::vector<int> nodes;
  std::vector<Link> links;
  FilterGeometry geometry;
  std::map<int, std::vector<std::string>> prefixes;  // origin -> plain names

  void validate() const;
  bool connected() const;
  bool has_node(int id) const;
  std::vector<int> neighbors(int node) const;  // sorted ascending

  // Text format, '#' comments:
  //   [geometry]  d = 4 / m_ind = 32768 [...] / k_i = 1 / seeds = 1 [...]
  //   [nodes]     one id per line
  //   [links]     a b cost
  //   [prefixes]  node name
  static Topology parse(std::istream& in);
};

// Advertisement of the names registered at a node. Carries both the
// source-encoded positions (what the adapted protocol floods) and the
// plain names for the exact-table modes.
struct PrefixAdvert {
  int origin = 0;
  std::vector<EncodedName> names;
  std::vector<std::string> plain;
  std::uint64_t seq = 0;
};

// Link-state advertisement of a node's direct neighbours, unchanged from
// a classic link-state protocol.
struct AdjacencyAdvert {
  int origin = 0;
  std::vector<std::pair<int, double>> neighbors;
  std::uint64_t seq = 0;
};

struct LinkStateDb {
  std::map<int, PrefixAdvert> prefixes;      // origin -> newest advert
  std::map<int, AdjacencyAdvert> adjacency;  // origin -> newest advert
};

// Per-node adverts for a static topology, everything bundled at one seq.
struct Adverts {
  std::vector<PrefixAdvert> prefixes;
  std::vector<AdjacencyAdvert> adjacency;
};
Adverts make_adverts(const Topology& topology, std::uint64_t seq = 1);

// Synchronous hop-by-hop flooding with duplicate suppression by
// (origin, seq); a newer seq supersedes the stored advert everywhere.
struct FloodResult {
  std::map<int, LinkStateDb> databases;
  int rounds = 0;  // propagation sweeps until quiescence
};
FloodResult flood_adverts(const Topology& topology, const Adverts& adverts);

// Shortest paths over the adjacency adverts in a database. Equal-cost
// paths resolve to the lowest first-hop id, then lowest predecessor.
struct SpfResult {
  std::map<int, double> dist;
  std::map<int, int> first_hop;  // destination -> neighbour of the root
};
SpfResult shortest_paths(int root, const LinkStateDb& db);

// How forwarding state is realized: real filters, exact zero-FPR tables,
// or exact tables with hierarchical-name traffic accounting.
enum class FibMode { kFilter, kOracle, kHierarchical };

// Exact per-level key sets; the zero-false-positive stand-in for a filter.
class ExactTable {
 public:
  explicit ExactTable(int depth) : depth_(depth), levels_(static_cast<std::size_t>(depth)) {}
  void insert(const HierarchicalName& name);
  int match_depth(const HierarchicalName& name) const;

 private:
  int depth_;
  std::vector<std::set<std::string>> levels_;
};

// Everything one node needs to forward: its interface map, the chosen
// match tables, and its own shortest-path view.
struct NodeFibs {
  int node = 0;
  FibMode mode = FibMode::kFilter;
  std::vector<int> iface_neighbor;  // interface id 1..deg -> neighbour id
  std::vector<InterfaceFib> filters;
  std::vector<ExactTable> exact;
  SpfResult spf;
  std::vector<int> unreachable_origins;  // advertised names that could not be placed

  int interface_for(int neighbor) const;
};

// Runs the shortest-path computation at `node` and ORs every advertised
// name of each destination into the table of the first-hop interface.
NodeFibs build_fibs(int node, const LinkStateDb& db, const Topology& topology,
                    FibMode mode = FibMode::kFilter);

std::map<int, NodeFibs> build_all_fibs(const Topology& topology, const FloodResult& flood,
                                       FibMode mode = FibMode::kFilter);

struct Interest {
  int source = 0;
  HierarchicalName name;
};

// Interest file: one "<source-node> <name>" pair per line, '#' comments.
std::vector<Interest> parse_interests(std::istream& in);

struct SimReport {
  std::uint64_t injected = 0;
  std::uint64_t delivered = 0;
  std::uint64_t misdelivered = 0;  // ended off-path: wandered on false positives or hit the TTL
  std::uint64_t dropped = 0;       // dead end without ever leaving the true path
  std::uint64_t detoured = 0;      // took at least one hop off the shortest-path DAG
  std::uint64_t total_hops = 0;
  std::uint64_t delivered_hops = 0;
  std::uint64_t max_hops = 0;
  std::uint64_t total_bits = 0;
  std::uint64_t seed = 0;
  std::map<std::pair<int, int>, std::uint64_t> link_bits;

  std::string to_csv() const;     // one summary row
  std::string links_csv() const;  // per-link traffic rows
};

struct SimOptions {
  std::uint64_t seed = 0;  // echoed in the report; forwarding is deterministic
  int ttl_factor = 2;      // hop limit = ttl_factor * |nodes|
};

// Hop-by-hop largest-match forwarding of each interest from its source
// until an origin of the name (delivered), a depth-0 decision, or the hop
// limit. Each hop charges the name's wire bits to the traversed link
// (character bits in hierarchical mode).
SimReport run_interests(const Topology& topology, const std::map<int, NodeFibs>& fibs,
                        const std::vector<Interest>& interests, SimOptions options = {});

}  // namespace ifibf::sim
