#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "ifibf/filter.hpp"

namespace ifibf {

// One forwarding table per output interface; all tables on a node share
// one geometry.
struct InterfaceFib {
  int interface_id = 0;
  IteratedBloomFilter filter;

  InterfaceFib(int id, FilterGeometry geometry, FilterOptions options = {})
      : interface_id(id), filter(std::move(geometry), std::move(options)) {}

  // Inserts every level of the name; the name will afterwards match at
  // full depth on this interface.
  void register_name(const EncodedName& name) { filter.insert(name); }
};

struct ForwardingDecision {
  std::optional<int> chosen;        // none when every candidate is at depth 0
  std::map<int, int> match_depths;  // interface -> depth, inbound excluded
  bool tie = false;
  std::vector<int> tied;            // all interfaces at the winning depth
};

struct DecideOptions {
  bool multicast_ties = false;  // deliver to every tied interface instead of the lowest id
};

// Largest-match selection: the inbound interface is excluded, every other
// filter is probed, and the deepest match wins; ties go to the lowest
// interface id (or to all tied interfaces in multicast mode). Pure
// function of (fibs, name, inbound).
ForwardingDecision decide(const std::vector<InterfaceFib>& fibs, const EncodedName& name,
                          std::optional<int> inbound, DecideOptions options = {});

// FIB dump: each interface id (u32, little endian) followed by its filter
// blob.
std::vector<std::uint8_t> dump_fibs(const std::vector<InterfaceFib>& fibs);

}  // namespace ifibf
