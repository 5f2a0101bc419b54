#include "ifibf/sim.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <queue>
#include <sstream>
#include <tuple>

#include "ifibf/csv.hpp"
#include "ifibf/error.hpp"

namespace ifibf::sim {

namespace {

std::pair<int, int> edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

std::string strip(const std::string& line) {
  std::string s = line.substr(0, line.find('#'));
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

void Topology::validate() const {
  if (nodes.empty()) throw InvalidParameter("topology: no nodes");
  geometry.validate();
  std::set<int> known(nodes.begin(), nodes.end());
  if (known.size() != nodes.size()) throw InvalidParameter("topology: duplicate node id");
  for (const auto& link : links) {
    if (link.a == link.b)
      throw InvalidParameter("topology: self-loop at node " + std::to_string(link.a));
    if (!known.count(link.a) || !known.count(link.b))
      throw UnknownNode("topology: link endpoint not in the node list");
    if (!(link.cost >= 0.0) || !std::isfinite(link.cost))
      throw InvalidParameter("topology: link cost must be finite and >= 0");
  }
  for (const auto& [node, names] : prefixes) {
    if (!known.count(node))
      throw UnknownNode("topology: prefix origin " + std::to_string(node) + " unknown");
    for (const auto& text : names) HierarchicalName::parse(text);
  }
}

bool Topology::has_node(int id) const {
  return std::find(nodes.begin(), nodes.end(), id) != nodes.end();
}

std::vector<int> Topology::neighbors(int node) const {
  std::set<int> out;
  for (const auto& link : links) {
    if (link.a == node) out.insert(link.b);
    if (link.b == node) out.insert(link.a);
  }
  return {out.begin(), out.end()};
}

bool Topology::connected() const {
  if (nodes.empty()) return false;
  std::set<int> seen{nodes.front()};
  std::queue<int> frontier;
  frontier.push(nodes.front());
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : neighbors(u))
      if (seen.insert(v).second) frontier.push(v);
  }
  return seen.size() == nodes.size();
}

Topology Topology::parse(std::istream& in) {
  Topology topo;
  int declared_d = 0;
  std::vector<std::uint64_t> seeds;
  std::string section;
  std::string line;
  int lineno = 0;

  auto fail = [&lineno](const std::string& why) {
    throw ParseError("topology line " + std::to_string(lineno) + ": " + why);
  };

  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = strip(line);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail("unterminated section header");
      section = s.substr(1, s.size() - 2);
      if (section != "geometry" && section != "nodes" && section != "links" &&
          section != "prefixes")
        fail("unknown section '" + section + "'");
      continue;
    }
    std::istringstream fields(s);
    if (section == "geometry") {
      std::string key, eq;
      fields >> key >> eq;
      if (eq != "=") fail("expected 'key = value...'");
      if (key == "d") {
        fields >> declared_d;
      } else if (key == "k_i") {
        fields >> topo.geometry.k_i;
      } else if (key == "m_ind") {
        std::uint64_t m;
        while (fields >> m) topo.geometry.m_ind.push_back(m);
      } else if (key == "seeds") {
        std::string tok;
        while (fields >> tok) seeds.push_back(std::stoull(tok, nullptr, 0));
      } else {
        fail("unknown geometry key '" + key + "'");
      }
      if (fields.fail() && !fields.eof()) fail("bad value for '" + key + "'");
    } else if (section == "nodes") {
      int id;
      while (fields >> id) topo.nodes.push_back(id);
      if (fields.fail() && !fields.eof()) fail("bad node id");
    } else if (section == "links") {
      Link link;
      if (!(fields >> link.a >> link.b >> link.cost)) fail("expected 'a b cost'");
      topo.links.push_back(link);
    } else if (section == "prefixes") {
      int node;
      std::string name;
      if (!(fields >> node >> name)) fail("expected 'node name'");
      topo.prefixes[node].push_back(name);
    } else {
      fail("content before any section header");
    }
  }

  if (declared_d > 0) {
    if (topo.geometry.m_ind.size() == 1)
      topo.geometry.m_ind.assign(static_cast<std::size_t>(declared_d), topo.geometry.m_ind[0]);
    if (topo.geometry.m_ind.size() != static_cast<std::size_t>(declared_d))
      throw ParseError("topology: d does not match the m_ind list");
  }
  if (seeds.empty()) {
    topo.geometry.seeds.clear();
    std::uint64_t state = 0;
    for (int i = 0; i < topo.geometry.k_i; ++i) topo.geometry.seeds.push_back(splitmix64(state));
  } else if (seeds.size() == 1 && topo.geometry.k_i > 1) {
    topo.geometry.seeds.clear();
    std::uint64_t state = seeds[0];
    for (int i = 0; i < topo.geometry.k_i; ++i) topo.geometry.seeds.push_back(splitmix64(state));
  } else {
    topo.geometry.seeds = seeds;
  }
  std::sort(topo.nodes.begin(), topo.nodes.end());
  topo.validate();
  return topo;
}

Adverts make_adverts(const Topology& topology, std::uint64_t seq) {
  topology.validate();
  Adverts out;
  for (int node : topology.nodes) {
    AdjacencyAdvert adj;
    adj.origin = node;
    adj.seq = seq;
    for (int nb : topology.neighbors(node)) {
      double cost = 0.0;
      for (const auto& link : topology.links)
        if (edge_key(link.a, link.b) == edge_key(node, nb)) cost = link.cost;
      adj.neighbors.emplace_back(nb, cost);
    }
    out.adjacency.push_back(std::move(adj));

    const auto it = topology.prefixes.find(node);
    if (it == topology.prefixes.end()) continue;
    PrefixAdvert pfx;
    pfx.origin = node;
    pfx.seq = seq;
    for (const auto& text : it->second) {
      pfx.plain.push_back(text);
      pfx.names.push_back(encode_name(HierarchicalName::parse(text), topology.geometry));
    }
    out.prefixes.push_back(std::move(pfx));
  }
  return out;
}

FloodResult flood_adverts(const Topology& topology, const Adverts& adverts) {
  topology.validate();

  FloodResult result;
  for (int node : topology.nodes) result.databases[node];

  // Accept into a database iff strictly newer than what it stores;
  // re-hearing the same (origin, seq) is suppressed.
  auto accept_prefix = [](LinkStateDb& db, const PrefixAdvert& adv) {
    auto it = db.prefixes.find(adv.origin);
    if (it != db.prefixes.end() && it->second.seq >= adv.seq) return false;
    db.prefixes[adv.origin] = adv;
    return true;
  };
  auto accept_adjacency = [](LinkStateDb& db, const AdjacencyAdvert& adv) {
    auto it = db.adjacency.find(adv.origin);
    if (it != db.adjacency.end() && it->second.seq >= adv.seq) return false;
    db.adjacency[adv.origin] = adv;
    return true;
  };

  // Adverts enter the network at their origin.
  std::map<int, std::vector<const PrefixAdvert*>> pfx_pending;
  std::map<int, std::vector<const AdjacencyAdvert*>> adj_pending;
  for (const auto& adv : adverts.prefixes) {
    if (!topology.has_node(adv.origin))
      throw UnknownNode("flood: prefix advert from unknown node " + std::to_string(adv.origin));
    if (accept_prefix(result.databases[adv.origin], adv)) pfx_pending[adv.origin].push_back(&adv);
  }
  for (const auto& adv : adverts.adjacency) {
    if (!topology.has_node(adv.origin))
      throw UnknownNode("flood: adjacency advert from unknown node " +
                        std::to_string(adv.origin));
    if (accept_adjacency(result.databases[adv.origin], adv))
      adj_pending[adv.origin].push_back(&adv);
  }

  while (!pfx_pending.empty() || !adj_pending.empty()) {
    std::map<int, std::vector<const PrefixAdvert*>> pfx_next;
    std::map<int, std::vector<const AdjacencyAdvert*>> adj_next;
    for (const auto& [node, advs] : pfx_pending)
      for (const auto* adv : advs)
        for (int nb : topology.neighbors(node))
          if (accept_prefix(result.databases[nb], *adv)) pfx_next[nb].push_back(adv);
    for (const auto& [node, advs] : adj_pending)
      for (const auto* adv : advs)
        for (int nb : topology.neighbors(node))
          if (accept_adjacency(result.databases[nb], *adv)) adj_next[nb].push_back(adv);
    if (pfx_next.empty() && adj_next.empty()) break;
    ++result.rounds;
    pfx_pending = std::move(pfx_next);
    adj_pending = std::move(adj_next);
  }
  return result;
}

namespace {

// Undirected edges from the adjacency adverts; when both endpoints
// advertise the link the newer seq wins, ties to the lower origin id.
std::map<std::pair<int, int>, double> reconciled_edges(const LinkStateDb& db) {
  std::map<std::pair<int, int>, std::tuple<double, std::uint64_t, int>> best;
  for (const auto& [origin, adv] : db.adjacency) {
    for (const auto& [nb, cost] : adv.neighbors) {
      const auto key = edge_key(origin, nb);
      auto it = best.find(key);
      if (it == best.end() || adv.seq > std::get<1>(it->second) ||
          (adv.seq == std::get<1>(it->second) && origin < std::get<2>(it->second)))
        best[key] = {cost, adv.seq, origin};
    }
  }
  std::map<std::pair<int, int>, double> out;
  for (const auto& [key, value] : best) out[key] = std::get<0>(value);
  return out;
}

}  // namespace

SpfResult shortest_paths(int root, const LinkStateDb& db) {
  const auto edges = reconciled_edges(db);
  std::map<int, std::vector<std::pair<int, double>>> adj;
  for (const auto& [key, cost] : edges) {
    adj[key.first].emplace_back(key.second, cost);
    adj[key.second].emplace_back(key.first, cost);
  }
  for (auto& [node, list] : adj) std::sort(list.begin(), list.end());

  SpfResult out;
  out.dist[root] = 0.0;
  // (dist, first_hop, node); lexicographic pops give the lowest-first-hop
  // tie-break for equal-cost paths.
  using Entry = std::tuple<double, int, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  heap.emplace(0.0, root, root);
  std::set<int> settled;

  while (!heap.empty()) {
    const auto [dist, fh, u] = heap.top();
    heap.pop();
    if (settled.count(u)) continue;
    settled.insert(u);
    const auto it = adj.find(u);
    if (it == adj.end()) continue;
    for (const auto& [v, cost] : it->second) {
      if (settled.count(v)) continue;
      const double nd = dist + cost;
      const int nfh = u == root ? v : fh;
      auto dit = out.dist.find(v);
      const bool better =
          dit == out.dist.end() || nd < dit->second ||
          (nd == dit->second && nfh < out.first_hop[v]);
      if (!better) continue;
      out.dist[v] = nd;
      if (v != root) out.first_hop[v] = nfh;
      heap.emplace(nd, nfh, v);
    }
  }
  return out;
}

void ExactTable::insert(const HierarchicalName& name) {
  const int reach = std::min(name.depth(), depth_);
  for (int x = 1; x <= reach; ++x)
    levels_[static_cast<std::size_t>(x - 1)].insert(level_key(name, x, depth_));
}

int ExactTable::match_depth(const HierarchicalName& name) const {
  const int reach = std::min(name.depth(), depth_);
  int depth = 0;
  for (int x = 1; x <= reach; ++x) {
    if (!levels_[static_cast<std::size_t>(x - 1)].count(level_key(name, x, depth_))) break;
    depth = x;
  }
  return depth;
}

int NodeFibs::interface_for(int neighbor) const {
  const auto it = std::find(iface_neighbor.begin(), iface_neighbor.end(), neighbor);
  if (it == iface_neighbor.end())
    throw UnknownNode("node " + std::to_string(node) + " has no interface toward " +
                      std::to_string(neighbor));
  return static_cast<int>(it - iface_neighbor.begin()) + 1;
}

NodeFibs build_fibs(int node, const LinkStateDb& db, const Topology& topology, FibMode mode) {
  if (!topology.has_node(node)) throw UnknownNode("build_fibs: unknown node " + std::to_string(node));

  NodeFibs out;
  out.node = node;
  out.mode = mode;
  out.iface_neighbor = topology.neighbors(node);
  const int depth = topology.geometry.depth();
  for (std::size_t i = 0; i < out.iface_neighbor.size(); ++i) {
    if (mode == FibMode::kFilter)
      out.filters.emplace_back(static_cast<int>(i) + 1, topology.geometry);
    else
      out.exact.emplace_back(depth);
  }
  out.spf = shortest_paths(node, db);

  for (const auto& [origin, advert] : db.prefixes) {
    if (origin == node) continue;  // own names are answered locally
    const auto fh = out.spf.first_hop.find(origin);
    if (fh == out.spf.first_hop.end()) {
      out.unreachable_origins.push_back(origin);
      continue;
    }
    const int iface = out.interface_for(fh->second);
    if (mode == FibMode::kFilter) {
      for (const auto& encoded : advert.names)
        out.filters[static_cast<std::size_t>(iface - 1)].register_name(encoded);
    } else {
      for (const auto& text : advert.plain)
        out.exact[static_cast<std::size_t>(iface - 1)].insert(HierarchicalName::parse(text));
    }
  }
  return out;
}

std::map<int, NodeFibs> build_all_fibs(const Topology& topology, const FloodResult& flood,
                                       FibMode mode) {
  std::map<int, NodeFibs> out;
  for (int node : topology.nodes)
    out.emplace(node, build_fibs(node, flood.databases.at(node), topology, mode));
  return out;
}

std::vector<Interest> parse_interests(std::istream& in) {
  std::vector<Interest> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = strip(line);
    if (s.empty()) continue;
    std::istringstream fields(s);
    Interest interest;
    std::string name;
    if (!(fields >> interest.source >> name))
      throw ParseError("interests line " + std::to_string(lineno) + ": expected 'node name'");
    interest.name = HierarchicalName::parse(name);
    out.push_back(std::move(interest));
  }
  return out;
}

namespace {

// Largest match across the exact tables, lowest interface id on ties.
std::optional<int> decide_exact(const std::vector<ExactTable>& tables,
                                const HierarchicalName& name, std::optional<int> inbound) {
  int best = 0;
  std::optional<int> chosen;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const int iface = static_cast<int>(i) + 1;
    if (inbound && iface == *inbound) continue;
    const int depth = tables[i].match_depth(name);
    if (depth > best) {
      best = depth;
      chosen = iface;
    }
  }
  return chosen;
}

}  // namespace

SimReport run_interests(const Topology& topology, const std::map<int, NodeFibs>& fibs,
                        const std::vector<Interest>& interests, SimOptions options) {
  topology.validate();
  SimReport report;
  report.seed = options.seed;
  const std::uint64_t ttl =
      static_cast<std::uint64_t>(options.ttl_factor) * topology.nodes.size();

  std::map<std::string, std::set<int>> origins_by_name;
  for (const auto& [node, names] : topology.prefixes)
    for (const auto& text : names) origins_by_name[text].insert(node);
  std::map<std::pair<int, int>, double> edges;
  for (const auto& link : topology.links) edges[edge_key(link.a, link.b)] = link.cost;

  for (const auto& interest : interests) {
    if (!topology.has_node(interest.source))
      throw UnknownNode("run_interests: unknown source " + std::to_string(interest.source));
    ++report.injected;

    const auto origin_it = origins_by_name.find(interest.name.to_string());
    const std::set<int>* origins =
        origin_it == origins_by_name.end() ? nullptr : &origin_it->second;

    const FibMode mode = fibs.at(interest.source).mode;
    EncodedName encoded;
    if (mode == FibMode::kFilter) encoded = encode_name(interest.name, topology.geometry);
    const int wire_levels = std::min(interest.name.depth(), topology.geometry.depth());
    const std::uint64_t hop_bits =
        mode == FibMode::kHierarchical
            ? 8ull * interest.name.character_count()
            : topology.geometry.name_bits(wire_levels);

    int current = interest.source;
    std::optional<int> inbound;
    std::uint64_t hops = 0;
    bool detoured = false;
    bool delivered = false;
    bool out_of_ttl = false;

    while (true) {
      if (origins && origins->count(current)) {
        delivered = true;
        break;
      }
      const NodeFibs& nfibs = fibs.at(current);
      std::optional<int> chosen;
      if (mode == FibMode::kFilter) {
        const auto decision = decide(nfibs.filters, encoded, inbound);
        chosen = decision.chosen;
      } else {
        chosen = decide_exact(nfibs.exact, interest.name, inbound);
      }
      if (!chosen) break;  // dead end
      if (hops >= ttl) {
        out_of_ttl = true;
        break;
      }
      const int next = nfibs.iface_neighbor[static_cast<std::size_t>(*chosen - 1)];

      // A hop is on-path when it stays on the shortest-path DAG toward
      // some origin of the name; anything else is a false-positive detour.
      bool on_path = false;
      if (origins) {
        const auto eit = edges.find(edge_key(current, next));
        const double w = eit == edges.end() ? 0.0 : eit->second;
        for (int o : *origins) {
          const auto du = nfibs.spf.dist.find(o);
          const auto dv = fibs.at(next).spf.dist.find(o);
          if (du == nfibs.spf.dist.end() || dv == fibs.at(next).spf.dist.end()) continue;
          if (std::abs(dv->second + w - du->second) <= 1e-9 * (1.0 + du->second)) {
            on_path = true;
            break;
          }
        }
      }
      if (!on_path) detoured = true;

      report.total_bits += hop_bits;
      report.link_bits[edge_key(current, next)] += hop_bits;
      inbound = fibs.at(next).interface_for(current);
      current = next;
      ++hops;
    }

    if (delivered)
      ++report.delivered;
    else if (detoured || out_of_ttl)
      ++report.misdelivered;
    else
      ++report.dropped;
    if (detoured) ++report.detoured;
    report.total_hops += hops;
    if (delivered) report.delivered_hops += hops;
    report.max_hops = std::max(report.max_hops, hops);
  }
  return report;
}

std::string SimReport::to_csv() const {
  std::ostringstream out;
  out << "injected,delivered,misdelivered,dropped,detoured,total_hops,delivered_hops,"
         "max_hops,total_bits,seed\n";
  out << injected << ',' << delivered << ',' << misdelivered << ',' << dropped << ','
      << detoured << ',' << total_hops << ',' << delivered_hops << ',' << max_hops << ','
      << total_bits << ',' << seed << '\n';
  return out.str();
}

std::string SimReport::links_csv() const {
  std::ostringstream out;
  out << "node_a,node_b,bits\n";
  for (const auto& [key, bits] : link_bits)
    out << key.first << ',' << key.second << ',' << bits << '\n';
  return out.str();
}

}  // namespace ifibf::sim
