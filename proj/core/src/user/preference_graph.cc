#include "usersim/user/preference_graph.h"

#include <algorithm>

#include "usersim/error.h"

namespace usersim::user {

PreferenceGraph::PreferenceGraph(const Domain& domain, std::uint64_t seed)
    : slots_(domain.slots()), rng_(seed) {}

double PreferenceGraph::GetItemPreference(std::string_view item_id) {
  auto [it, inserted] = item_pref_.try_emplace(std::string(item_id), 0.0);
  if (inserted) it->second = Draw();
  return it->second;
}

double PreferenceGraph::GetAttributePreference(std::string_view slot,
                                               std::string_view value) {
  if (std::find(slots_.begin(), slots_.end(), slot) == slots_.end())
    throw Error(ErrorCode::kUnknownSlot,
                "preference query for undeclared slot '" + std::string(slot) + "'");
  auto [it, inserted] =
      attr_pref_.try_emplace({std::string(slot), std::string(value)}, 0.0);
  if (inserted) it->second = Draw();
  return it->second;
}

std::vector<std::pair<std::string, double>> PreferenceGraph::KnownValues(
    std::string_view slot) const {
  std::vector<std::pair<std::string, double>> out;
  for (auto it = attr_pref_.lower_bound({std::string(slot), std::string()});
       it != attr_pref_.end() && it->first.first == slot; ++it)
    out.emplace_back(it->first.second, it->second);
  return out;
}

PreferenceGraph BuildPreferenceGraph(const std::vector<Rating>& ratings,
                                     const ItemCollection& items,
                                     const RatingScale& scale, const Domain& domain,
                                     std::uint64_t seed) {
  scale.Validate();
  PreferenceGraph graph(domain, seed);

  // Sorting raw values per item keeps every floating-point sum independent
  // of input order.
  std::map<std::string, std::vector<double>> by_item;
  for (const auto& r : ratings) {
    if (items.Find(r.item_id) == nullptr) {
      graph.skipped_items_.push_back(r.item_id);
      continue;
    }
    by_item[r.item_id].push_back(r.rating);
  }
  std::sort(graph.skipped_items_.begin(), graph.skipped_items_.end());
  graph.skipped_items_.erase(
      std::unique(graph.skipped_items_.begin(), graph.skipped_items_.end()),
      graph.skipped_items_.end());

  const double span = scale.max - scale.min;
  for (auto& [item_id, values] : by_item) {
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    double mean = sum / static_cast<double>(values.size());
    double weight = 2.0 * (mean - scale.min) / span - 1.0;
    graph.item_pref_[item_id] = std::clamp(weight, -1.0, 1.0);
  }

  std::map<std::pair<std::string, std::string>, std::pair<double, int>> acc;
  for (const auto& [item_id, weight] : graph.item_pref_) {
    const Item* item = items.Find(item_id);
    for (const auto& [slot, values] : item->attributes) {
      if (!domain.HasSlot(slot)) continue;
      for (const auto& v : values) {
        auto& [sum, count] = acc[{slot, v}];
        sum += weight;
        ++count;
      }
    }
  }
  for (const auto& [key, sc] : acc)
    graph.attr_pref_[key] = std::clamp(sc.first / sc.second, -1.0, 1.0);
  return graph;
}

}  // namespace usersim::user
