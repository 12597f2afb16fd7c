#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "testing.h"
#include "usersim/nlg/template_store.h"
#include "usersim/transcript.h"

namespace usersim::nlg {
namespace {

Dialogue OneUtterance(std::string text, std::string intent, std::vector<SlotValue> slots,
                      std::optional<int> satisfaction = std::nullopt) {
  Dialogue d;
  d.dialogue_id = "d";
  d.utterances.push_back(
      {Participant::kUser, std::move(text), 0, Intent(intent), std::move(slots), satisfaction});
  return d;
}

std::map<std::string, std::string> FirstValues(const std::vector<SlotValue>& slots) {
  std::map<std::string, std::string> out;
  for (const auto& sv : slots) out.emplace(sv.slot, sv.value);
  return out;
}

TEST(Buckets, SatisfactionScale) {
  EXPECT_EQ(BucketFor(1), SatisfactionBucket::kLow);
  EXPECT_EQ(BucketFor(2), SatisfactionBucket::kLow);
  EXPECT_EQ(BucketFor(3), SatisfactionBucket::kMid);
  EXPECT_EQ(BucketFor(4), SatisfactionBucket::kHigh);
  EXPECT_EQ(BucketFor(5), SatisfactionBucket::kHigh);
}

TEST(Polarity, WordLists) {
  EXPECT_EQ(PolarityOf("I like {genre} movies"), Polarity::kPositive);
  EXPECT_EQ(PolarityOf("I don't like {genre}"), Polarity::kNegative);
  EXPECT_EQ(PolarityOf("No, I want something else"), Polarity::kNegative);
  EXPECT_EQ(PolarityOf("I LOVE it"), Polarity::kPositive);
  EXPECT_EQ(PolarityOf("Tell me more about {title}"), Polarity::kNeutral);
  EXPECT_EQ(PolarityOf("nothing likeable"), Polarity::kNeutral);
}

TEST(MakeTemplate, DerivesSlotsAndLength) {
  auto t = MakeTemplate(Intent("DISCLOSE"), "I like {genre} and {keyword}, {genre}!",
                        Polarity::kPositive, SatisfactionBucket::kAny);
  EXPECT_EQ(t.slots, (std::set<std::string>{"genre", "keyword"}));
  EXPECT_EQ(Placeholders(t.pattern), (std::vector<std::string>{"genre", "keyword", "genre"}));
  EXPECT_EQ(t.length, 6);
  EXPECT_EQ(testing::ErrorCodeOf([] {
              MakeTemplate(Intent("X"), "I like {genre", Polarity::kNeutral,
                           SatisfactionBucket::kAny);
            }),
            ErrorCode::kMalformedDocument);
}

TEST(ExtractTemplates, SpanSubstitution) {
  auto store = ExtractTemplates(
      {OneUtterance("I like action movies", "DISCLOSE", {{"genre", "action"}}),
       OneUtterance("I don't like horror", "REVISE", {{"genre", "horror"}}, 2)});
  ASSERT_EQ(store.For(Intent("DISCLOSE")).size(), 1u);
  const auto& like = store.For(Intent("DISCLOSE"))[0];
  EXPECT_EQ(like.pattern, "I like {genre} movies");
  EXPECT_EQ(like.polarity, Polarity::kPositive);
  EXPECT_EQ(like.bucket, SatisfactionBucket::kAny);
  EXPECT_EQ(like.length, 4);

  const auto& dislike = store.For(Intent("REVISE"))[0];
  EXPECT_EQ(dislike.pattern, "I don't like {genre}");
  EXPECT_EQ(dislike.polarity, Polarity::kNegative);
  EXPECT_EQ(dislike.bucket, SatisfactionBucket::kLow);
}

TEST(ExtractTemplates, WholeWordSpanPreferred) {
  auto store = ExtractTemplates(
      {OneUtterance("Heathers or Heat, show me Heat", "DISCLOSE", {{"title", "Heat"}})});
  EXPECT_EQ(store.For(Intent("DISCLOSE"))[0].pattern, "Heathers or {title}, show me Heat");
}

TEST(ExtractTemplates, IdenticalUtterancesStoredOnce) {
  auto d = OneUtterance("I like action movies", "DISCLOSE", {{"genre", "action"}});
  auto store = ExtractTemplates({d, d});
  EXPECT_EQ(store.For(Intent("DISCLOSE")).size(), 1u);
  // Same pattern from a different value is the same template too.
  store = ExtractTemplates(
      {d, OneUtterance("I like comedy movies", "DISCLOSE", {{"genre", "comedy"}})});
  EXPECT_EQ(store.For(Intent("DISCLOSE")).size(), 1u);
}

TEST(ExtractTemplates, AgentUtterancesIgnoredAndGapsCovered) {
  Dialogue d;
  d.dialogue_id = "d";
  d.utterances.push_back({Participant::kAgent, "Which genre?", 0, Intent("ELICIT"), {}, {}});
  d.utterances.push_back({Participant::kUser, "Drama", 1, Intent("DISCLOSE"), {{"genre", "Drama"}}, {}});
  auto store = ExtractTemplates({d}, {Intent("DISCLOSE"), Intent("INQUIRE"), Intent("DONE")});
  EXPECT_FALSE(store.Covers(Intent("ELICIT")));
  EXPECT_EQ(store.For(Intent("DISCLOSE")).size(), 1u);
  ASSERT_EQ(store.For(Intent("INQUIRE")).size(), 1u);
  EXPECT_TRUE(store.For(Intent("INQUIRE"))[0].is_default);
  EXPECT_EQ(store.For(Intent("INQUIRE"))[0].pattern, "Can you tell me more about it?");
  EXPECT_EQ(store.For(Intent("DONE"))[0].pattern, "Goodbye.");
  EXPECT_EQ(store.For(Intent("DONE"))[0].polarity, Polarity::kNeutral);
}

TEST(ExtractTemplates, BundledSampleRoundTrips) {
  auto sample = ImportDialogues(testing::DataFile("sample_dialogues.json"));
  int checked = 0;
  for (const auto& d : sample) {
    for (const auto& u : d.utterances) {
      if (u.participant != Participant::kUser || !u.annotated()) continue;
      Dialogue single;
      single.dialogue_id = "x";
      single.utterances = {u};
      auto store = ExtractTemplates({single});
      ASSERT_EQ(store.For(*u.intent).size(), 1u);
      const auto& t = store.For(*u.intent)[0];
      EXPECT_EQ(Instantiate(t, FirstValues(u.slot_values)), u.text) << t.pattern;
      if (!u.slot_values.empty()) {
        EXPECT_FALSE(t.slots.empty()) << u.text;
      }
      ++checked;
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(ExtractTemplates, RandomRoundTrip) {
  std::mt19937 gen(31);
  const std::vector<std::string> words = {"I", "want", "a", "good", "film", "with", "the",
                                          "one", "action", "Heat", "please", "now"};
  const std::vector<std::string> slots = {"title", "genre", "keyword"};
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    int n = 1 + static_cast<int>(gen() % 8);
    for (int i = 0; i < n; ++i) {
      if (!text.empty()) text += gen() % 4 ? " " : ", ";
      text += words[gen() % words.size()];
    }
    std::vector<SlotValue> annotations;
    for (const auto& slot : slots) {
      if (gen() % 2) continue;
      // A substring of the text, which may sit inside a word.
      std::size_t b = gen() % text.size();
      std::size_t len = 1 + gen() % std::min<std::size_t>(6, text.size() - b);
      annotations.push_back({slot, text.substr(b, len)});
    }
    auto store = ExtractTemplates({OneUtterance(text, "DISCLOSE", annotations)});
    const auto& t = store.For(Intent("DISCLOSE"))[0];
    EXPECT_EQ(Instantiate(t, FirstValues(annotations)), text) << t.pattern;
  }
}

TEST(Instantiate, Substitution) {
  auto t = MakeTemplate(Intent("DISCLOSE"), "I like {genre} movies", Polarity::kPositive,
                        SatisfactionBucket::kAny);
  EXPECT_EQ(Instantiate(t, {{"genre", "action"}}), "I like action movies");
  EXPECT_EQ(Instantiate(t, {{"genre", "action"}, {"title", "Heat"}}), "I like action movies");
  EXPECT_EQ(testing::ErrorCodeOf([&] { Instantiate(t, {}); }), ErrorCode::kMissingSlotValue);

  auto plain = MakeTemplate(Intent("DONE"), "Bye.", Polarity::kNeutral, SatisfactionBucket::kAny);
  EXPECT_EQ(Instantiate(plain, {}), "Bye.");
}

class SelectTemplateTest : public ::testing::Test {
 protected:
  void Add(std::string pattern, Polarity p, SatisfactionBucket b) {
    store_.Add(MakeTemplate(Intent("DISCLOSE"), std::move(pattern), p, b));
  }
  Selection Select(std::set<std::string> needed, std::optional<Polarity> p,
                   user::ContextState context = {}) {
    return SelectTemplate(store_, Intent("DISCLOSE"), needed, p, context, rng_);
  }

  TemplateStore store_;
  Rng rng_{3};
};

TEST_F(SelectTemplateTest, SingletonDoesNotDrawFromRng) {
  Add("I like {genre} movies", Polarity::kPositive, SatisfactionBucket::kAny);
  Add("I don't like {genre}", Polarity::kNegative, SatisfactionBucket::kAny);
  Rng witness(3);
  auto s = Select({"genre"}, Polarity::kPositive);
  EXPECT_EQ(s.stage, 1);
  EXPECT_EQ(s.chosen.pattern, "I like {genre} movies");
  EXPECT_EQ(rng_.NextU64(), witness.NextU64());
}

TEST_F(SelectTemplateTest, SlotFreeTemplatesFallToDefault) {
  Add("Something fun please", Polarity::kNeutral, SatisfactionBucket::kAny);
  store_.SetDefaultPattern(Intent("DISCLOSE"), "I am looking for {slot}.");
  auto s = Select({"genre"}, Polarity::kPositive);
  EXPECT_EQ(s.stage, 5);
  EXPECT_TRUE(s.chosen.is_default);
  EXPECT_EQ(s.chosen.pattern, "I am looking for {genre}.");
  EXPECT_EQ(Instantiate(s.chosen, {{"genre", "drama"}}), "I am looking for drama.");
}

TEST_F(SelectTemplateTest, LowSatisfactionKeepsOnlyLowBucket) {
  Add("Ugh, just give me {genre}!", Polarity::kNeutral, SatisfactionBucket::kLow);
  Add("I said {genre}, come on", Polarity::kNeutral, SatisfactionBucket::kLow);
  Add("I would love some {genre}", Polarity::kPositive, SatisfactionBucket::kHigh);
  Add("Maybe {genre}", Polarity::kNeutral, SatisfactionBucket::kAny);
  user::ContextState ctx;
  ctx.satisfaction = 1;
  for (int i = 0; i < 50; ++i) {
    auto s = Select({"genre"}, std::nullopt, ctx);
    EXPECT_EQ(s.stage, 1);
    EXPECT_EQ(s.chosen.bucket, SatisfactionBucket::kLow);
  }
}

TEST_F(SelectTemplateTest, CascadeRelaxesBucketThenPolarity) {
  Add("I like {genre}", Polarity::kPositive, SatisfactionBucket::kHigh);
  user::ContextState ctx;
  ctx.satisfaction = 1;
  EXPECT_EQ(Select({"genre"}, Polarity::kPositive, ctx).stage, 3);
  EXPECT_EQ(Select({"genre"}, Polarity::kNegative, ctx).stage, 4);
  ctx.satisfaction = 5;
  EXPECT_EQ(Select({"genre"}, Polarity::kNegative, ctx).stage, 4);
  EXPECT_EQ(Select({"genre"}, Polarity::kPositive, ctx).stage, 1);
}

TEST_F(SelectTemplateTest, NightPrefersShorterHalf) {
  Add("{genre}", Polarity::kNeutral, SatisfactionBucket::kAny);
  Add("{genre} please", Polarity::kNeutral, SatisfactionBucket::kAny);
  Add("I would really like to watch some {genre} tonight", Polarity::kNeutral,
      SatisfactionBucket::kAny);
  Add("Could you find me a {genre} film for this evening", Polarity::kNeutral,
      SatisfactionBucket::kAny);
  user::ContextState night;
  night.time_of_day = user::TimeOfDay::kNight;
  user::ContextState group;
  group.setting = user::Setting::kGroup;
  for (int i = 0; i < 50; ++i) {
    EXPECT_LE(Select({"genre"}, std::nullopt, night).chosen.length, 2);
    EXPECT_LE(Select({"genre"}, std::nullopt, group).chosen.length, 2);
  }
  std::set<std::string> seen;
  for (int i = 0; i < 200; ++i) seen.insert(Select({"genre"}, std::nullopt).chosen.pattern);
  EXPECT_EQ(seen.size(), 4u);
}

Template RandomTemplate(std::mt19937& gen) {
  static const std::vector<std::string> slot_names = {"title", "genre", "keyword"};
  std::string pattern = "x";
  int words = static_cast<int>(gen() % 5);
  for (int i = 0; i < words; ++i) pattern += " w";
  for (const auto& s : slot_names)
    if (gen() % 3 == 0) pattern += " {" + s + "}";
  auto polarity = static_cast<Polarity>(gen() % 3);
  auto bucket = static_cast<SatisfactionBucket>(gen() % 4);
  return MakeTemplate(Intent("DISCLOSE"), pattern, polarity, bucket);
}

user::ContextState RandomContext(std::mt19937& gen) {
  user::ContextState c;
  c.time_of_day = static_cast<user::TimeOfDay>(gen() % 4);
  c.setting = static_cast<user::Setting>(gen() % 2);
  c.satisfaction = 1 + static_cast<int>(gen() % 5);
  return c;
}

TEST(SelectTemplateProperty, TotalAndMonotoneUnderAdditions) {
  std::mt19937 gen(17);
  const std::vector<std::string> slot_names = {"title", "genre", "keyword"};
  for (int trial = 0; trial < 500; ++trial) {
    TemplateStore store;
    int n = static_cast<int>(gen() % 6);
    for (int i = 0; i < n; ++i) store.Add(RandomTemplate(gen));
    std::set<std::string> needed;
    for (const auto& s : slot_names)
      if (gen() % 3 == 0) needed.insert(s);
    std::optional<Polarity> polarity;
    if (gen() % 4) polarity = static_cast<Polarity>(gen() % 3);
    auto ctx = RandomContext(gen);

    Rng rng(trial);
    auto before = SelectTemplate(store, Intent("DISCLOSE"), needed, polarity, ctx, rng);
    EXPECT_TRUE(std::includes(before.chosen.slots.begin(), before.chosen.slots.end(),
                              needed.begin(), needed.end()));
    std::map<std::string, std::string> values;
    for (const auto& s : before.chosen.slots) values[s] = "v";
    auto text = Instantiate(before.chosen, values);
    EXPECT_EQ(text.find_first_of("{}"), std::string::npos);

    int extra = 1 + static_cast<int>(gen() % 4);
    for (int i = 0; i < extra; ++i) store.Add(RandomTemplate(gen));
    auto after = SelectTemplate(store, Intent("DISCLOSE"), needed, polarity, ctx, rng);
    EXPECT_LE(after.stage, before.stage);
  }
}

TEST(TemplateStore, JsonRoundTripAndSlotValidation) {
  auto sample = ImportDialogues(testing::DataFile("sample_dialogues.json"));
  auto store = ExtractTemplates(sample, {Intent("GREETING"), Intent("REVISE")});
  auto back = TemplateStore::FromJson(store.ToJson());
  EXPECT_EQ(back.ToJson(), store.ToJson());
  EXPECT_EQ(back.size(), store.size());

  Domain domain("movies", {"title", "genre", "keyword"});
  EXPECT_NO_THROW(store.ValidateSlots(domain));
  store.Add(MakeTemplate(Intent("DISCLOSE"), "by {director}", Polarity::kNeutral,
                         SatisfactionBucket::kAny));
  EXPECT_EQ(testing::ErrorCodeOf([&] { store.ValidateSlots(domain); }), ErrorCode::kUnknownSlot);
}

}  // namespace
}  // namespace usersim::nlg
