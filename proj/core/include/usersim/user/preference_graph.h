#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "usersim/domain.h"
#include "usersim/items.h"
#include "usersim/ratings.h"
#include "usersim/rng.h"

namespace usersim::user {

// Personal knowledge graph: per-user preference weights in [-1,1] on item
// nodes and (slot, value) attribute nodes. Missing weights are sampled
// uniformly on first query and then frozen, so a user never contradicts
// itself.
class PreferenceGraph {
 public:
  PreferenceGraph(const Domain& domain, std::uint64_t seed);

  // Cold-start aware lookups; they mutate the graph on a miss.
  // GetAttributePreference throws Error(kUnknownSlot) for undeclared slots.
  double GetItemPreference(std::string_view item_id);
  double GetAttributePreference(std::string_view slot, std::string_view value);

  // Read-only view of materialized weights.
  const std::map<std::string, double>& item_preferences() const { return item_pref_; }
  const std::map<std::pair<std::string, std::string>, double>& attribute_preferences()
      const {
    return attr_pref_;
  }
  // Materialized (value, weight) pairs for one slot, in value order.
  std::vector<std::pair<std::string, double>> KnownValues(std::string_view slot) const;

  // Rated ids absent from the item collection during construction.
  const std::vector<std::string>& skipped_items() const { return skipped_items_; }

  friend PreferenceGraph BuildPreferenceGraph(const std::vector<Rating>& ratings,
                                              const ItemCollection& items,
                                              const RatingScale& scale,
                                              const Domain& domain, std::uint64_t seed);

  // Weight equality only; the generator state is not compared.
  bool SameWeights(const PreferenceGraph& other) const {
    return item_pref_ == other.item_pref_ && attr_pref_ == other.attr_pref_;
  }

 private:
  double Draw() { return rng_.Uniform(-1.0, 1.0); }

  std::vector<std::string> slots_;
  std::map<std::string, double> item_pref_;
  std::map<std::pair<std::string, std::string>, double> attr_pref_;
  std::vector<std::string> skipped_items_;
  Rng rng_;
};

// item weight = 2 (r - min) / (max - min) - 1; repeated ratings of one item
// are averaged. Attribute weight = mean item weight over the user's rated
// items carrying that attribute value. The result does not depend on the
// order of `ratings`. Throws Error(kInvalidScale) when min == max.
PreferenceGraph BuildPreferenceGraph(const std::vector<Rating>& ratings,
                                     const ItemCollection& items,
                                     const RatingScale& scale, const Domain& domain,
                                     std::uint64_t seed);

}  // namespace usersim::user
