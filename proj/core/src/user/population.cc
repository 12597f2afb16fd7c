#include "usersim/user/population.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include "usersim/error.h"

namespace usersim::user {

using nlohmann::json;

namespace {

template <typename T>
void ValidateDistribution(const Distribution<T>& d, const char* name) {
  bool any_positive = false;
  for (const auto& [_, w] : d) {
    if (!(w >= 0.0))
      throw Error(ErrorCode::kInvalidConfig,
                  std::string("negative weight in distribution '") + name + "'");
    any_positive |= w > 0.0;
  }
  if (!any_positive)
    throw Error(ErrorCode::kInvalidConfig,
                std::string("distribution '") + name + "' has no positive weight");
}

template <typename T>
T Sample(const Distribution<T>& d, Rng& rng) {
  std::vector<double> weights;
  std::vector<const T*> values;
  for (const auto& [v, w] : d) {
    values.push_back(&v);
    weights.push_back(w);
  }
  return *values[rng.Categorical(weights)];
}

template <typename T, typename Parse>
Distribution<T> ParseTable(const json& table, const char* name, Parse parse) {
  if (!table.is_object() || table.empty())
    throw Error(ErrorCode::kInvalidConfig,
                std::string("'") + name + "' must be a non-empty {value: weight} table");
  Distribution<T> d;
  for (const auto& [key, weight] : table.items()) {
    if (!weight.is_number())
      throw Error(ErrorCode::kInvalidConfig,
                  std::string("weight for '") + key + "' in '" + name + "' is not a number");
    d[parse(key)] = weight.template get<double>();
  }
  return d;
}

int ParseIntKey(const std::string& key, const char* name) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(key, &pos);
    if (pos == key.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kInvalidConfig,
              std::string("'") + key + "' in '" + name + "' is not an integer");
}

double ParseRealKey(const std::string& key, const char* name) {
  try {
    std::size_t pos = 0;
    double v = std::stod(key, &pos);
    if (pos == key.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kInvalidConfig,
              std::string("'") + key + "' in '" + name + "' is not a number");
}

template <typename T, typename ParseFn>
T ParseEnumKey(const std::string& key, const char* name, ParseFn parse) {
  if (auto v = parse(key)) return *v;
  throw Error(ErrorCode::kInvalidConfig,
              std::string("unknown value '") + key + "' in '" + name + "'");
}

std::string FormatReal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

void PopulationConfig::Validate() const {
  if (n_users < 1) throw Error(ErrorCode::kInvalidConfig, "n_users must be positive");
  ValidateDistribution(patience, "patience");
  ValidateDistribution(cooperativeness, "cooperativeness");
  ValidateDistribution(time_of_day, "time_of_day");
  ValidateDistribution(day_type, "day_type");
  ValidateDistribution(setting, "setting");
  ValidateDistribution(satisfaction, "satisfaction");
  for (const auto& [p, _] : patience)
    if (p < 1) throw Error(ErrorCode::kInvalidConfig, "patience values must be >= 1");
  for (const auto& [c, _] : cooperativeness)
    if (c < 0.0 || c > 1.0)
      throw Error(ErrorCode::kInvalidConfig, "cooperativeness values must lie in [0,1]");
  for (const auto& [s, _] : satisfaction)
    if (s < 1 || s > 5)
      throw Error(ErrorCode::kInvalidConfig, "satisfaction values must lie in 1..5");
}

PopulationConfig ParsePopulationConfig(const json& j) {
  PopulationConfig c;
  try {
    c.n_users = j.at("n_users").get<int>();
    c.seed = j.value("seed", std::uint64_t{0});
    c.ground_in_ratings = j.value("ground_in_ratings", false);
    if (auto p = j.find("persona"); p != j.end()) {
      if (p->contains("patience"))
        c.patience = ParseTable<int>(p->at("patience"), "patience",
                                     [](const std::string& k) { return ParseIntKey(k, "patience"); });
      if (p->contains("cooperativeness"))
        c.cooperativeness = ParseTable<double>(
            p->at("cooperativeness"), "cooperativeness",
            [](const std::string& k) { return ParseRealKey(k, "cooperativeness"); });
    }
    if (auto ctx = j.find("context"); ctx != j.end()) {
      if (ctx->contains("time_of_day"))
        c.time_of_day = ParseTable<TimeOfDay>(ctx->at("time_of_day"), "time_of_day",
                                              [](const std::string& k) {
                                                return ParseEnumKey<TimeOfDay>(
                                                    k, "time_of_day", ParseTimeOfDay);
                                              });
      if (ctx->contains("day_type"))
        c.day_type = ParseTable<DayType>(ctx->at("day_type"), "day_type",
                                         [](const std::string& k) {
                                           return ParseEnumKey<DayType>(k, "day_type",
                                                                        ParseDayType);
                                         });
      if (ctx->contains("setting"))
        c.setting = ParseTable<Setting>(ctx->at("setting"), "setting",
                                        [](const std::string& k) {
                                          return ParseEnumKey<Setting>(k, "setting",
                                                                       ParseSetting);
                                        });
      if (ctx->contains("satisfaction"))
        c.satisfaction = ParseTable<int>(
            ctx->at("satisfaction"), "satisfaction",
            [](const std::string& k) { return ParseIntKey(k, "satisfaction"); });
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("population config: ") + e.what());
  }
  c.Validate();
  return c;
}

PopulationConfig LoadPopulationConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, path.string() + ": " + e.what());
  }
  return ParsePopulationConfig(j);
}

json PopulationConfigToJson(const PopulationConfig& c) {
  json persona, context;
  for (const auto& [v, w] : c.patience) persona["patience"][std::to_string(v)] = w;
  for (const auto& [v, w] : c.cooperativeness)
    persona["cooperativeness"][FormatReal(v)] = w;
  for (const auto& [v, w] : c.time_of_day) context["time_of_day"][std::string(ToString(v))] = w;
  for (const auto& [v, w] : c.day_type) context["day_type"][std::string(ToString(v))] = w;
  for (const auto& [v, w] : c.setting) context["setting"][std::string(ToString(v))] = w;
  for (const auto& [v, w] : c.satisfaction) context["satisfaction"][std::to_string(v)] = w;
  return {{"n_users", c.n_users},
          {"seed", c.seed},
          {"ground_in_ratings", c.ground_in_ratings},
          {"persona", persona},
          {"context", context}};
}

std::vector<UserProfile> GeneratePopulation(const PopulationConfig& config,
                                            const std::vector<Rating>& ratings,
                                            const ItemCollection& items,
                                            const RatingScale& scale,
                                            const Domain& domain) {
  config.Validate();
  const auto n = static_cast<std::size_t>(config.n_users);

  std::vector<std::string> grounding;
  if (config.ground_in_ratings) {
    std::set<std::string> distinct;
    for (const auto& r : ratings) distinct.insert(r.user_id);
    if (distinct.size() < n)
      throw Error(ErrorCode::kInsufficientRatingsUsers,
                  "population of " + std::to_string(n) + " needs as many ratings users, " +
                      "found " + std::to_string(distinct.size()));
    // Partial Fisher-Yates over the sorted ids.
    std::vector<std::string> pool(distinct.begin(), distinct.end());
    Rng pick(DeriveSeed(config.seed, 0xfeed));
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t j = i + pick.Index(pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
    grounding.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n));
  }

  std::map<std::string, std::vector<Rating>> by_user;
  if (config.ground_in_ratings)
    for (const auto& r : ratings) by_user[r.user_id].push_back(r);

  std::vector<UserProfile> population;
  population.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t seed = DeriveSeed(config.seed, i);
    Rng rng(seed);
    Persona persona{Sample(config.patience, rng), Sample(config.cooperativeness, rng)};
    ContextState context;
    context.time_of_day = Sample(config.time_of_day, rng);
    context.day_type = Sample(config.day_type, rng);
    context.setting = Sample(config.setting, rng);
    context.satisfaction = Sample(config.satisfaction, rng);

    char id[32];
    std::snprintf(id, sizeof id, "user-%04zu", i + 1);
    std::uint64_t pref_seed = DeriveSeed(seed, 1);
    if (config.ground_in_ratings) {
      population.push_back({id, persona, context,
                            BuildPreferenceGraph(by_user[grounding[i]], items, scale,
                                                 domain, pref_seed),
                            seed, grounding[i]});
    } else {
      population.push_back(
          {id, persona, context, PreferenceGraph(domain, pref_seed), seed, ""});
    }
  }
  return population;
}

}  // namespace usersim::user
