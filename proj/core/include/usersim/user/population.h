#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "usersim/domain.h"
#include "usersim/items.h"
#include "usersim/ratings.h"
#include "usersim/user/context.h"
#include "usersim/user/preference_graph.h"

namespace usersim::user {

// Value -> sampling weight. Keys are kept in the order of the underlying
// std::map so sampling is reproducible.
template <typename T>
using Distribution = std::map<T, double>;

struct PopulationConfig {
  int n_users = 1;
  std::uint64_t seed = 0;
  bool ground_in_ratings = false;

  Distribution<int> patience{{3, 1.0}};
  Distribution<double> cooperativeness{{0.5, 1.0}};
  Distribution<TimeOfDay> time_of_day{{TimeOfDay::kAfternoon, 1.0}};
  Distribution<DayType> day_type{{DayType::kWeekday, 1.0}};
  Distribution<Setting> setting{{Setting::kAlone, 1.0}};
  Distribution<int> satisfaction{{3, 1.0}};

  // Throws Error(kInvalidConfig): n_users < 1, negative weights, a trait
  // without positive weight, or trait values out of range.
  void Validate() const;
};

// {
//   "n_users": 50, "seed": 42, "ground_in_ratings": true,
//   "persona": {"patience": {"2": 0.5, "5": 0.5},
//               "cooperativeness": {"0.8": 1}},
//   "context": {"time_of_day": {"evening": 1}, "day_type": {...},
//               "setting": {...}, "satisfaction": {"3": 1}}
// }
PopulationConfig ParsePopulationConfig(const nlohmann::json& j);
PopulationConfig LoadPopulationConfig(const std::filesystem::path& path);
nlohmann::json PopulationConfigToJson(const PopulationConfig& config);

struct UserProfile {
  std::string user_id;
  Persona persona;
  ContextState context;
  PreferenceGraph preferences;
  std::uint64_t seed = 0;
  // Ratings user the preferences were grounded in; empty when not grounded.
  std::string grounded_on;
};

// Deterministic in (config, ratings, items). Each profile gets its own seed
// derived from the master seed. With grounding, profiles are built from
// distinct ratings users sampled without replacement.
// Throws Error(kInsufficientRatingsUsers) when grounding cannot be satisfied.
std::vector<UserProfile> GeneratePopulation(const PopulationConfig& config,
                                            const std::vector<Rating>& ratings,
                                            const ItemCollection& items,
                                            const RatingScale& scale,
                                            const Domain& domain);

}  // namespace usersim::user
