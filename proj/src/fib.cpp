#include "ifibf/fib.hpp"

#include <algorithm>
#include <string>

#include "ifibf/error.hpp"

namespace ifibf {

ForwardingDecision decide(const std::vector<InterfaceFib>& fibs, const EncodedName& name,
                          std::optional<int> inbound, DecideOptions options) {
  if (inbound) {
    const bool known = std::any_of(fibs.begin(), fibs.end(), [&](const InterfaceFib& f) {
      return f.interface_id == *inbound;
    });
    if (!known)
      throw InvalidParameter("decide: unknown inbound interface " + std::to_string(*inbound));
  }

  ForwardingDecision out;
  int best = 0;
  for (const auto& fib : fibs) {
    if (inbound && fib.interface_id == *inbound) continue;
    const int depth = fib.filter.match_depth(name);
    out.match_depths[fib.interface_id] = depth;
    best = std::max(best, depth);
  }
  if (best == 0) return out;  // nothing matched anywhere

  for (const auto& [iface, depth] : out.match_depths)
    if (depth == best) out.tied.push_back(iface);
  out.tie = out.tied.size() > 1;
  out.chosen = out.tied.front();  // map iteration is ordered, front is the lowest id
  if (!options.multicast_ties && out.tie) out.tied = {*out.chosen};
  return out;
}

std::vector<std::uint8_t> dump_fibs(const std::vector<InterfaceFib>& fibs) {
  std::vector<std::uint8_t> out;
  for (const auto& fib : fibs) {
    const auto id = static_cast<std::uint32_t>(fib.interface_id);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(id >> (8 * i)));
    const auto blob = fib.filter.serialize();
    out.insert(out.end(), blob.begin(), blob.end());
  }
  return out;
}

}  // namespace ifibf
