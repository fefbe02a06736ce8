#include "snapcheck/context.hpp"

namespace snapcheck {

std::vector<Violation> violation_filter(const PairSet& pairs, const ReadingMap& readings) {
  std::vector<Violation> out;
  for (const auto& pair : pairs) {
    auto a = readings.find(pair.first);
    auto b = readings.find(pair.second);
    if (a == readings.end() || b == readings.end()) continue;
    if (a->second.user != b->second.user) continue;
    if (a->second.location == b->second.location) continue;
    out.push_back({pair, a->second.user, a->second.location, b->second.location});
  }
  return out;
}

}  // namespace snapcheck
