#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "testing.h"
#include "usersim/domain.h"
#include "usersim/items.h"
#include "usersim/ratings.h"
#include "usersim/user/context.h"
#include "usersim/user/population.h"
#include "usersim/user/preference_graph.h"

namespace usersim::user {
namespace {

const Domain kDomain("movies", {"title", "genre", "keyword"});

ItemCollection ToyItems() {
  ItemCollection items;
  items.Add({"i1", "Alpha", {{"genre", {"action"}}, {"keyword", {"heist"}}}});
  items.Add({"i2", "Beta", {{"genre", {"action", "comedy"}}}});
  items.Add({"i3", "Gamma", {{"genre", {"drama"}}}});
  return items;
}

TEST(PreferenceGraph, ItemWeightFormula) {
  auto items = ToyItems();
  auto g = BuildPreferenceGraph({{"u", "i1", 5}, {"u", "i2", 3}, {"u", "i3", 1}}, items,
                                {1, 5}, kDomain, 1);
  EXPECT_DOUBLE_EQ(g.item_preferences().at("i1"), 1.0);
  EXPECT_DOUBLE_EQ(g.item_preferences().at("i2"), 0.0);
  EXPECT_DOUBLE_EQ(g.item_preferences().at("i3"), -1.0);
}

TEST(PreferenceGraph, AttributeIsMeanOverRatedItems) {
  auto items = ToyItems();
  auto g = BuildPreferenceGraph({{"u", "i1", 5}, {"u", "i2", 3}}, items, {1, 5}, kDomain, 1);
  // i1 (+1.0) and i2 (0.0) both carry genre=action.
  EXPECT_DOUBLE_EQ(g.GetAttributePreference("genre", "action"), 0.5);
  EXPECT_DOUBLE_EQ(g.GetAttributePreference("genre", "comedy"), 0.0);
  EXPECT_DOUBLE_EQ(g.GetAttributePreference("keyword", "heist"), 1.0);
  // Eagerly materialized for every attribute reachable from rated items.
  EXPECT_EQ(g.attribute_preferences().size(), 3u);
}

TEST(PreferenceGraph, RepeatedRatingsAreAveraged) {
  auto items = ToyItems();
  auto g = BuildPreferenceGraph({{"u", "i1", 5}, {"u", "i1", 1}}, items, {1, 5}, kDomain, 1);
  EXPECT_DOUBLE_EQ(g.item_preferences().at("i1"), 0.0);
}

TEST(PreferenceGraph, UnknownItemsAreSkipped) {
  auto items = ToyItems();
  auto g = BuildPreferenceGraph({{"u", "zz", 5}, {"u", "i1", 4}}, items, {1, 5}, kDomain, 1);
  EXPECT_EQ(g.skipped_items(), std::vector<std::string>{"zz"});
  EXPECT_EQ(g.item_preferences().count("zz"), 0u);
}

TEST(PreferenceGraph, DegenerateScale) {
  auto items = ToyItems();
  EXPECT_EQ(testing::ErrorCodeOf([&] {
              BuildPreferenceGraph({{"u", "i1", 3}}, items, {3, 3}, kDomain, 1);
            }),
            ErrorCode::kInvalidScale);
}

TEST(PreferenceGraph, StoredValueIsStable) {
  auto items = ToyItems();
  auto g = BuildPreferenceGraph({{"u", "i1", 5}, {"u", "i2", 3}}, items, {1, 5}, kDomain, 1);
  for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(g.GetAttributePreference("genre", "action"), 0.5);
}

TEST(PreferenceGraph, ColdStartIsSampledOnceThenFrozen) {
  PreferenceGraph g(kDomain, 99);
  double w = g.GetAttributePreference("keyword", "heist");
  EXPECT_GE(w, -1.0);
  EXPECT_LE(w, 1.0);
  g.GetItemPreference("i7");
  g.GetAttributePreference("genre", "drama");
  EXPECT_EQ(g.GetAttributePreference("keyword", "heist"), w);
}

TEST(PreferenceGraph, SameSeedSameQueryOrderSameColdStart) {
  PreferenceGraph a(kDomain, 7), b(kDomain, 7);
  for (const char* v : {"x", "y", "z"})
    EXPECT_EQ(a.GetAttributePreference("genre", v), b.GetAttributePreference("genre", v));
  EXPECT_EQ(a.GetItemPreference("i1"), b.GetItemPreference("i1"));
  EXPECT_TRUE(a.SameWeights(b));
}

TEST(PreferenceGraph, UnknownSlot) {
  PreferenceGraph g(kDomain, 1);
  EXPECT_EQ(testing::ErrorCodeOf([&] { g.GetAttributePreference("director", "x"); }),
            ErrorCode::kUnknownSlot);
}

// Random ratings over the bundled collection; consistency, range and order
// independence.
TEST(PreferenceGraph, PropertiesOverRandomUsers) {
  ItemCollection items = LoadItemCollection(testing::DataFile("movies.items"), kDomain);
  std::vector<std::string> ids;
  for (const auto& it : items.items()) ids.push_back(it.item_id);
  std::vector<std::pair<std::string, std::string>> attrs;
  for (const auto& slot : {"genre", "keyword"})
    for (const auto& v : items.DistinctValues(slot)) attrs.emplace_back(slot, v);
  attrs.emplace_back("keyword", "never seen value");

  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Rating> ratings;
    int n = static_cast<int>(gen() % 12);
    for (int i = 0; i < n; ++i)
      ratings.push_back({"u", ids[gen() % ids.size()], 1.0 + static_cast<double>(gen() % 5)});
    const std::uint64_t seed = gen();
    auto g = BuildPreferenceGraph(ratings, items, {1, 5}, kDomain, seed);

    auto shuffled = ratings;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    auto h = BuildPreferenceGraph(shuffled, items, {1, 5}, kDomain, seed);
    EXPECT_TRUE(g.SameWeights(h));

    std::vector<double> first;
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < attrs.size(); ++i) order.push_back(i % attrs.size());
    for (int q = 0; q < 40; ++q) order.push_back(gen() % attrs.size());
    std::map<std::size_t, double> seen;
    for (std::size_t idx : order) {
      double w = g.GetAttributePreference(attrs[idx].first, attrs[idx].second);
      EXPECT_GE(w, -1.0);
      EXPECT_LE(w, 1.0);
      auto [it, fresh] = seen.emplace(idx, w);
      if (!fresh) {
        EXPECT_EQ(it->second, w);
      }
    }
    for (const auto& id : ids) {
      double w = g.GetItemPreference(id);
      EXPECT_EQ(g.GetItemPreference(id), w);
      EXPECT_GE(w, -1.0);
      EXPECT_LE(w, 1.0);
    }
  }
}

TEST(Satisfaction, UpdateRules) {
  ContextState c;
  c.satisfaction = 3;
  EXPECT_EQ(UpdateSatisfaction(c, SatisfactionEvent::kUnexpectedResponse).satisfaction, 2);
  EXPECT_EQ(UpdateSatisfaction(c, SatisfactionEvent::kGoodRecommendation).satisfaction, 4);
  EXPECT_EQ(UpdateSatisfaction(c, SatisfactionEvent::kExpectedResponse).satisfaction, 3);
  c.satisfaction = 1;
  EXPECT_EQ(UpdateSatisfaction(c, SatisfactionEvent::kBadRecommendation).satisfaction, 1);
  c.satisfaction = 5;
  EXPECT_EQ(UpdateSatisfaction(c, SatisfactionEvent::kGoodRecommendation).satisfaction, 5);
}

TEST(Context, DescribeAndParse) {
  ContextState c{TimeOfDay::kEvening, DayType::kWeekend, Setting::kAlone, 3};
  EXPECT_EQ(c.Describe(), "evening/weekend/alone/3");
  EXPECT_EQ(ParseTimeOfDay("night"), TimeOfDay::kNight);
  EXPECT_FALSE(ParseSetting("crowd").has_value());
}

TEST(Persona, Validate) {
  EXPECT_NO_THROW((Persona{1, 0.0}.Validate()));
  EXPECT_EQ(testing::ErrorCodeOf([] { Persona{0, 0.5}.Validate(); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(testing::ErrorCodeOf([] { Persona{2, 1.5}.Validate(); }), ErrorCode::kInvalidConfig);
}

TEST(Population, DegenerateDistributions) {
  PopulationConfig config;
  config.n_users = 1;
  config.patience = {{4, 1.0}};
  config.cooperativeness = {{0.25, 1.0}};
  config.time_of_day = {{TimeOfDay::kNight, 1.0}};
  config.setting = {{Setting::kGroup, 1.0}};
  auto pop = GeneratePopulation(config, {}, ToyItems(), {1, 5}, kDomain);
  ASSERT_EQ(pop.size(), 1u);
  EXPECT_EQ(pop[0].persona, (Persona{4, 0.25}));
  EXPECT_EQ(pop[0].context.time_of_day, TimeOfDay::kNight);
  EXPECT_EQ(pop[0].context.setting, Setting::kGroup);
  EXPECT_EQ(pop[0].user_id, "user-0001");
  EXPECT_TRUE(pop[0].grounded_on.empty());
}

TEST(Population, DeterministicInSeed) {
  ItemCollection items = LoadItemCollection(testing::DataFile("movies.items"), kDomain);
  auto ratings = LoadRatings(testing::DataFile("movies.ratings.csv"), {1, 5});
  auto config = LoadPopulationConfig(testing::DataFile("population.json"));
  auto a = GeneratePopulation(config, ratings, items, {1, 5}, kDomain);
  auto b = GeneratePopulation(config, ratings, items, {1, 5}, kDomain);
  ASSERT_EQ(a.size(), 50u);
  std::set<std::string> ids, grounded;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].user_id, b[i].user_id);
    EXPECT_EQ(a[i].persona, b[i].persona);
    EXPECT_EQ(a[i].context, b[i].context);
    EXPECT_EQ(a[i].seed, b[i].seed);
    EXPECT_EQ(a[i].grounded_on, b[i].grounded_on);
    EXPECT_TRUE(a[i].preferences.SameWeights(b[i].preferences));
    ids.insert(a[i].user_id);
    grounded.insert(a[i].grounded_on);
  }
  EXPECT_EQ(ids.size(), 50u);
  EXPECT_EQ(grounded.size(), 50u);

  config.seed += 1;
  auto c = GeneratePopulation(config, ratings, items, {1, 5}, kDomain);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    differs |= a[i].grounded_on != c[i].grounded_on || !(a[i].persona == c[i].persona);
  EXPECT_TRUE(differs);
}

TEST(Population, PatienceShareFollowsWeights) {
  PopulationConfig config;
  config.n_users = 1000;
  config.seed = 3;
  config.patience = {{2, 0.5}, {5, 0.5}};
  auto pop = GeneratePopulation(config, {}, ToyItems(), {1, 5}, kDomain);
  double share = 0;
  for (const auto& p : pop) share += p.persona.patience == 2;
  share /= static_cast<double>(pop.size());
  EXPECT_NEAR(share, 0.5, 0.05);
}

TEST(Population, InsufficientRatingsUsers) {
  PopulationConfig config;
  config.n_users = 3;
  config.ground_in_ratings = true;
  std::vector<Rating> ratings = {{"a", "i1", 5}, {"b", "i2", 1}};
  EXPECT_EQ(testing::ErrorCodeOf(
                [&] { GeneratePopulation(config, ratings, ToyItems(), {1, 5}, kDomain); }),
            ErrorCode::kInsufficientRatingsUsers);
}

TEST(Population, ConfigParsingErrors) {
  auto code = [](const char* text) {
    return testing::ErrorCodeOf([&] { ParsePopulationConfig(nlohmann::json::parse(text)); });
  };
  EXPECT_EQ(code(R"({"n_users": 0})"), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code(R"({"seed": 1})"), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code(R"({"n_users": 2, "persona": {"patience": {"2": -1}}})"),
            ErrorCode::kInvalidConfig);
  EXPECT_EQ(code(R"({"n_users": 2, "persona": {"patience": {"2": 0}}})"),
            ErrorCode::kInvalidConfig);
  EXPECT_EQ(code(R"({"n_users": 2, "context": {"time_of_day": {"dusk": 1}}})"),
            ErrorCode::kInvalidConfig);
}

TEST(Population, ConfigRoundTrip) {
  auto config = LoadPopulationConfig(testing::DataFile("population.json"));
  auto again = ParsePopulationConfig(PopulationConfigToJson(config));
  EXPECT_EQ(again.n_users, config.n_users);
  EXPECT_EQ(again.seed, config.seed);
  EXPECT_EQ(again.patience, config.patience);
  EXPECT_EQ(again.cooperativeness, config.cooperativeness);
  EXPECT_EQ(again.time_of_day, config.time_of_day);
}

}  // namespace
}  // namespace usersim::user
