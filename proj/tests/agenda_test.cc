#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "testing.h"
#include "usersim/agenda/agenda.h"
#include "usersim/agenda/interaction_model.h"
#include "usersim/agenda/simulated_user.h"
#include "usersim/nlu/intent_classifier.h"
#include "usersim/nlu/slot_extractor.h"
#include "usersim/transcript.h"

namespace usersim::agenda {
namespace {

const Domain kDomain("movies", {"title", "genre", "keyword"});

nlohmann::json Crsv1Json() {
  std::ifstream in(testing::DataFile("crsv1.json"));
  return nlohmann::json::parse(in);
}

std::vector<Intent> Intents(std::initializer_list<const char*> labels) {
  std::vector<Intent> out;
  for (const char* l : labels) out.emplace_back(l);
  return out;
}

InteractionModel SmallModel() {
  InteractionModel m;
  m.user_intents = Intents({"DISCLOSE", "INQUIRE", "ACCEPT", "REJECT", "DONE"});
  m.agent_intents = Intents({"ELICIT", "RECOMMEND", "INFORM", "UNKNOWN", "BYE"});
  m.expected_responses[Intent("DISCLOSE")] = {Intent("ELICIT"), Intent("RECOMMEND")};
  m.expected_responses[Intent("INQUIRE")] = {Intent("INFORM")};
  m.required_slots[Intent("DISCLOSE")] = {"genre"};
  m.transitions.SetRow("START", {{"DISCLOSE", 1.0}});
  m.transitions.SetRow("DISCLOSE", {{"INQUIRE", 0.5}, {"END", 0.5}});
  m.transitions.SetRow("INQUIRE", {{"DONE", 1.0}});
  return m;
}

TEST(InteractionModel, Crsv1Parses) {
  auto m = ParseInteractionModel(Crsv1Json(), kDomain);
  EXPECT_EQ(m.name, "crsv1");
  for (const char* i : {"GREETING", "DISCLOSE", "REVISE", "INQUIRE", "ACCEPT", "REJECT", "DONE"})
    EXPECT_TRUE(m.IsUserIntent(Intent(i))) << i;
  for (const char* i : {"WELCOME", "ELICIT", "RECOMMEND", "INFORM", "CONFIRM", "BYE", "UNKNOWN"})
    EXPECT_TRUE(m.IsAgentIntent(Intent(i))) << i;
  EXPECT_EQ(m.terminal_intent, Intent("DONE"));
  EXPECT_TRUE(m.IsExpected(Intent("DISCLOSE"), Intent("RECOMMEND")));
  EXPECT_FALSE(m.IsExpected(Intent("DISCLOSE"), Intent("UNKNOWN")));
  EXPECT_EQ(m.RequiredSlots(Intent("DISCLOSE")), std::vector<std::string>{"genre"});
  EXPECT_TRUE(m.RequiredSlots(Intent("ACCEPT")).empty());
}

TEST(InteractionModel, ConfigErrors) {
  auto code = [](nlohmann::json j) {
    return testing::ErrorCodeOf([&] { ParseInteractionModel(j, kDomain); });
  };
  auto j = Crsv1Json();
  j["expected_responses"]["SHOUT"] = {"WELCOME"};
  EXPECT_EQ(code(j), ErrorCode::kUnknownIntent);

  j = Crsv1Json();
  j["expected_responses"]["DISCLOSE"] = {"DANCE"};
  EXPECT_EQ(code(j), ErrorCode::kUnknownIntent);

  j = Crsv1Json();
  j["user_intents"].erase("DONE");
  EXPECT_EQ(code(j), ErrorCode::kNoTerminalIntent);

  j = Crsv1Json();
  j.erase("terminal_intent");
  EXPECT_EQ(code(j), ErrorCode::kNoTerminalIntent);

  j = Crsv1Json();
  j["user_intents"]["DISCLOSE"]["required_slots"] = {"director"};
  EXPECT_EQ(code(j), ErrorCode::kUnknownSlot);

  j = Crsv1Json();
  j["agent_intents"] = 5;
  EXPECT_EQ(code(j), ErrorCode::kInvalidConfig);
}

Dialogue WithUserIntents(const std::string& id, std::vector<std::string> intents) {
  Dialogue d;
  d.dialogue_id = id;
  int turn = 0;
  for (const auto& i : intents) {
    d.utterances.push_back({Participant::kAgent, "agent", turn++, Intent("X"), {}, {}});
    d.utterances.push_back({Participant::kUser, "user " + i, turn++, Intent(i), {}, {}});
  }
  return d;
}

TEST(LearnTransitions, TwoTurnInstance) {
  auto m = LearnTransitions({WithUserIntents("d", {"DISCLOSE", "ACCEPT"})}, SmallModel());
  // Counts START->DISCLOSE 1, DISCLOSE->ACCEPT 1, ACCEPT->END 1, each row
  // smoothed over its support plus END.
  using Row = TransitionTable::Row;
  EXPECT_EQ(m.transitions.RowFor("START"), (Row{{"DISCLOSE", 2.0 / 3}, {"END", 1.0 / 3}}));
  EXPECT_EQ(m.transitions.RowFor("DISCLOSE"), (Row{{"ACCEPT", 2.0 / 3}, {"END", 1.0 / 3}}));
  EXPECT_EQ(m.transitions.RowFor("ACCEPT"), (Row{{"END", 1.0}}));
  EXPECT_EQ(m.transitions.RowFor("INQUIRE"), (Row{{"END", 1.0}}));
}

TEST(LearnTransitions, DuplicatedDialogueChangesNothing) {
  auto d = WithUserIntents("d", {"DISCLOSE", "INQUIRE", "ACCEPT"});
  auto once = LearnTransitions({d}, SmallModel());
  auto twice = LearnTransitions({d, d}, SmallModel());
  EXPECT_EQ(once.transitions, twice.transitions);
}

TEST(LearnTransitions, Errors) {
  EXPECT_EQ(testing::ErrorCodeOf([] { LearnTransitions({}, SmallModel()); }),
            ErrorCode::kEmptyTrainingSet);
  EXPECT_EQ(testing::ErrorCodeOf(
                [] { LearnTransitions({WithUserIntents("d", {"SING"})}, SmallModel()); }),
            ErrorCode::kUnknownIntent);
}

TEST(LearnTransitions, RowsStochasticWithEndMassOnBundledSample) {
  auto sample = ImportDialogues(testing::DataFile("sample_dialogues.json"));
  auto m = LearnTransitions(sample, ParseInteractionModel(Crsv1Json(), kDomain));
  ASSERT_EQ(m.transitions.rows().size(), m.user_intents.size() + 1);
  for (const auto& [state, row] : m.transitions.rows()) {
    double total = 0;
    for (const auto& [_, p] : row) total += p;
    EXPECT_NEAR(total, 1.0, 1e-9) << state;
    ASSERT_TRUE(row.contains("END")) << state;
    EXPECT_GT(row.at("END"), 0.0) << state;
  }
  EXPECT_NO_THROW(m.transitions.Validate());
}

TEST(LearnTransitions, RowsStochasticOnRandomSamples) {
  std::mt19937 gen(8);
  const std::vector<std::string> labels = {"DISCLOSE", "INQUIRE", "ACCEPT", "REJECT", "DONE"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Dialogue> sample;
    int n = 1 + static_cast<int>(gen() % 6);
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> seq;
      int len = static_cast<int>(gen() % 7);
      for (int k = 0; k < len; ++k) seq.push_back(labels[gen() % labels.size()]);
      sample.push_back(WithUserIntents("d" + std::to_string(i), seq));
    }
    auto m = LearnTransitions(sample, SmallModel());
    for (const auto& [state, row] : m.transitions.rows()) {
      double total = 0;
      for (const auto& [_, p] : row) total += p;
      EXPECT_NEAR(total, 1.0, 1e-9);
      EXPECT_GT(row.at("END"), 0.0);
    }
  }
}

TEST(InitializeAgenda, DegenerateChain) {
  InteractionModel m = SmallModel();
  m.transitions = {};
  m.transitions.SetRow("START", {{"DISCLOSE", 1.0}});
  m.transitions.SetRow("DISCLOSE", {{"END", 1.0}});
  for (std::uint64_t seed : {1, 2, 3}) {
    Rng rng(seed);
    auto a = InitializeAgenda(m, rng, 5);
    EXPECT_EQ(a.Items(), Intents({"DISCLOSE", "DONE"}));
    EXPECT_EQ(a.Top(), Intent("DISCLOSE"));
  }
}

TEST(InitializeAgenda, CapBoundsNeverEndingChain) {
  InteractionModel m = SmallModel();
  m.transitions = {};
  m.transitions.SetRow("START", {{"INQUIRE", 1.0}});
  m.transitions.SetRow("INQUIRE", {{"INQUIRE", 1.0}});
  Rng rng(1);
  auto a = InitializeAgenda(m, rng, 3);
  EXPECT_EQ(a.Items(), Intents({"INQUIRE", "INQUIRE", "DONE"}));
}

TEST(InitializeAgenda, WalkEndingOnTerminalIsNotDoubled) {
  Rng rng(4);
  auto a = InitializeAgenda(SmallModel(), rng, 20);
  auto items = a.Items();
  ASSERT_FALSE(items.empty());
  EXPECT_EQ(items.back(), Intent("DONE"));
  EXPECT_EQ(std::count(items.begin(), items.end(), Intent("DONE")), 1);
}

TEST(InitializeAgenda, FirstIntentFrequenciesFollowStartRow) {
  auto sample = ImportDialogues(testing::DataFile("sample_dialogues.json"));
  auto m = LearnTransitions(sample, ParseInteractionModel(Crsv1Json(), kDomain));
  Rng rng(77);
  const int n = 10000;
  std::map<std::string, int> first;
  for (int i = 0; i < n; ++i) {
    auto a = InitializeAgenda(m, rng);
    auto items = a.Items();
    // A walk that drew END straight away leaves only the appended terminal.
    std::string label = items.size() == 1 ? "END" : items.front().label();
    ++first[label];
  }
  for (const auto& [target, p] : m.transitions.RowFor("START"))
    EXPECT_NEAR(first[target] / static_cast<double>(n), p, 0.05) << target;
}

class NextUserActionTest : public ::testing::Test {
 protected:
  InteractionModel model_ = SmallModel();
  user::ContextState context_;
};

TEST_F(NextUserActionTest, ExpectedResponsePopsWithoutTouchingRng) {
  Agenda agenda(Intents({"INQUIRE", "DONE"}));
  agenda.last_action = Intent("DISCLOSE");
  agenda.consecutive_unexpected = 1;
  Rng rng(5), witness(5);
  auto action = NextUserAction(agenda, Intent("ELICIT"), model_, {3, 0.5}, context_, rng);
  EXPECT_EQ(action.intent, Intent("INQUIRE"));
  EXPECT_EQ(action.branch, ActionBranch::kPulled);
  EXPECT_EQ(action.event, user::SatisfactionEvent::kExpectedResponse);
  EXPECT_EQ(agenda.Items(), Intents({"DONE"}));
  EXPECT_EQ(agenda.consecutive_unexpected, 0);
  EXPECT_EQ(agenda.last_action, Intent("INQUIRE"));
  EXPECT_EQ(rng.NextU64(), witness.NextU64());
}

TEST_F(NextUserActionTest, FirstAgentUtteranceIsExpected) {
  Agenda agenda(Intents({"DISCLOSE", "DONE"}));
  Rng rng(1);
  auto action = NextUserAction(agenda, Intent("UNKNOWN"), model_, {1, 0.0}, context_, rng);
  EXPECT_EQ(action.intent, Intent("DISCLOSE"));
  EXPECT_EQ(action.branch, ActionBranch::kPulled);
}

TEST_F(NextUserActionTest, EmptyAgendaGivesTerminal) {
  Agenda agenda;
  agenda.last_action = Intent("DISCLOSE");
  Rng rng(1);
  auto action = NextUserAction(agenda, Intent("RECOMMEND"), model_, {3, 0.5}, context_, rng);
  EXPECT_EQ(action.intent, Intent("DONE"));
}

TEST_F(NextUserActionTest, UnexpectedWithFullCooperationRepeats) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Agenda agenda(Intents({"INQUIRE", "DONE"}));
    agenda.last_action = Intent("DISCLOSE");
    Rng rng(seed);
    auto action = NextUserAction(agenda, Intent("UNKNOWN"), model_, {5, 1.0}, context_, rng);
    EXPECT_EQ(action.intent, Intent("DISCLOSE"));
    EXPECT_EQ(action.branch, ActionBranch::kRepeated);
    EXPECT_EQ(action.event, user::SatisfactionEvent::kUnexpectedResponse);
    EXPECT_EQ(agenda.Items(), Intents({"INQUIRE", "DONE"}));
    EXPECT_EQ(agenda.consecutive_unexpected, 1);
  }
}

TEST_F(NextUserActionTest, UnexpectedWithoutCooperationSamplesFromRowWithoutEnd) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Agenda agenda(Intents({"DONE"}));
    agenda.last_action = Intent("DISCLOSE");
    Rng rng(seed);
    auto action = NextUserAction(agenda, Intent("UNKNOWN"), model_, {5, 0.0}, context_, rng);
    // DISCLOSE's row is {INQUIRE, END}; END is masked out.
    EXPECT_EQ(action.intent, Intent("INQUIRE"));
    EXPECT_EQ(action.branch, ActionBranch::kSampled);
    EXPECT_EQ(agenda.Items(), Intents({"DONE"}));
    EXPECT_EQ(agenda.last_action, Intent("INQUIRE"));
  }
}

TEST_F(NextUserActionTest, PatienceExhaustionQuitsRegardlessOfRng) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Agenda agenda(Intents({"INQUIRE", "DONE"}));
    agenda.last_action = Intent("DISCLOSE");
    agenda.consecutive_unexpected = 2;
    Rng rng(seed);
    auto action = NextUserAction(agenda, Intent("UNKNOWN"), model_, {3, 1.0}, context_, rng);
    EXPECT_EQ(action.intent, Intent("DONE"));
    EXPECT_EQ(action.branch, ActionBranch::kQuit);
  }
}

// End-to-end turns of a simulated user over hand-built models.
class SimulatedUserTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ItemCollection items;
    items.Add({"i1", "Heat", {{"genre", {"action"}}}});
    items.Add({"i2", "Airplane", {{"genre", {"comedy"}}}});
    items.Add({"i3", "Arrival", {{"genre", {"drama"}}}});

    InteractionModel im = SmallModel();
    im.user_intents = Intents({"DISCLOSE", "INQUIRE", "ACCEPT", "REJECT", "DONE"});
    im.expected_responses[Intent("ACCEPT")] = {Intent("BYE")};
    im.expected_responses[Intent("REJECT")] = {Intent("RECOMMEND")};
    im.transitions = {};
    im.transitions.SetRow("START", {{"DISCLOSE", 1.0}});
    im.transitions.SetRow("DISCLOSE", {{"END", 1.0}});

    auto agent = nlu::TrainIntentClassifier({{"What genre do you like?", Intent("ELICIT")},
                                             {"I recommend Heat", Intent("RECOMMEND")},
                                             {"Sorry I did not get that", Intent("UNKNOWN")}});
    auto lexicon = nlu::TrainSlotExtractor({}, items, kDomain);

    nlg::TemplateStore templates;
    using nlg::Polarity;
    using nlg::SatisfactionBucket;
    templates.Add(nlg::MakeTemplate(Intent("DISCLOSE"), "I like {genre} movies",
                                    Polarity::kPositive, SatisfactionBucket::kAny));
    templates.Add(nlg::MakeTemplate(Intent("DISCLOSE"), "I don't like {genre}",
                                    Polarity::kNegative, SatisfactionBucket::kAny));
    templates.Add(nlg::MakeTemplate(Intent("ACCEPT"), "Sure, {title} it is",
                                    Polarity::kNeutral, SatisfactionBucket::kAny));
    templates.Add(nlg::MakeTemplate(Intent("REJECT"), "Seen it", Polarity::kNeutral,
                                    SatisfactionBucket::kAny));
    templates.Add(nlg::MakeTemplate(Intent("DONE"), "Bye", Polarity::kNeutral,
                                    SatisfactionBucket::kAny));
    for (const auto& [intent, pattern] : nlg::BuiltinDefaultPatterns())
      templates.SetDefaultPattern(Intent(intent), pattern);

    models_ = std::make_shared<SimulatorModels>(
        SimulatorModels{kDomain, items, im, agent, lexicon, templates});
  }

  user::UserProfile Profile(std::vector<Rating> ratings, user::Persona persona = {3, 0.5}) {
    user::UserProfile p{"user-0001", persona, {}, user::PreferenceGraph(kDomain, 0), 1234, ""};
    p.preferences = user::BuildPreferenceGraph(ratings, models_->items, {1, 5}, kDomain, 99);
    return p;
  }

  std::shared_ptr<const SimulatorModels> models_;
};

TEST_F(SimulatedUserTest, DisclosesStrongestPositivePreference) {
  // Rating 4.8 on [1,5] maps to +0.9; comedy sits at -0.5.
  SimulatedUser user(models_, Profile({{"u", "i1", 4.8}, {"u", "i2", 2.0}}));
  Reply r = user.Respond("What genre do you like?");
  EXPECT_EQ(r.intent, Intent("DISCLOSE"));
  EXPECT_EQ(r.slot_values, (std::vector<SlotValue>{{"genre", "action"}}));
  EXPECT_EQ(r.text, "I like action movies");
  EXPECT_FALSE(r.terminate);
  ASSERT_EQ(user.trace().size(), 1u);
  EXPECT_EQ(user.trace()[0].agent_intent, Intent("ELICIT"));
}

TEST_F(SimulatedUserTest, NegativePreferenceUsesNegativePolarity) {
  SimulatedUser user(models_, Profile({{"u", "i1", 3.2}, {"u", "i2", 1.0}}));
  Reply r = user.Respond("What genre do you like?");
  EXPECT_EQ(r.text, "I don't like comedy");
}

TEST_F(SimulatedUserTest, RecommendationFollowsItemPreference) {
  SimulatedUser liked(models_, Profile({{"u", "i1", 5}}));
  liked.Respond("What genre do you like?");
  Reply r = liked.Respond("I recommend Heat");
  EXPECT_EQ(r.intent, Intent("ACCEPT"));
  EXPECT_EQ(r.text, "Sure, Heat it is");
  EXPECT_EQ(liked.trace().back().satisfaction, 4);

  SimulatedUser disliked(models_, Profile({{"u", "i1", 1}}));
  disliked.Respond("What genre do you like?");
  EXPECT_EQ(disliked.Respond("I recommend Heat").intent, Intent("REJECT"));
  EXPECT_EQ(disliked.trace().back().satisfaction, 2);
}

TEST_F(SimulatedUserTest, ExhaustedPatienceEndsWithTerminalUtterance) {
  SimulatedUser user(models_, Profile({{"u", "i1", 5}}, {1, 1.0}));
  user.Respond("What genre do you like?");
  Reply r = user.Respond("Sorry I did not get that");
  EXPECT_EQ(r.intent, Intent("DONE"));
  EXPECT_EQ(r.text, "Bye");
  EXPECT_TRUE(r.terminate);
  EXPECT_EQ(user.trace().back().branch, ActionBranch::kQuit);
  EXPECT_TRUE(user.Respond("hello?").terminate);
}

TEST_F(SimulatedUserTest, ReplayIsDeterministic) {
  const std::vector<std::string> script = {"What genre do you like?", "Sorry I did not get that",
                                           "What genre do you like?", "I recommend Heat",
                                           "Sorry I did not get that"};
  auto run = [&] {
    SimulatedUser user(models_, Profile({{"u", "i2", 4}}, {4, 0.5}));
    std::vector<std::string> out;
    for (const auto& line : script) {
      Reply r = user.Respond(line);
      out.push_back(r.intent->label() + ":" + r.text);
      if (r.terminate) break;
    }
    return out;
  };
  EXPECT_EQ(run(), run());
}

}  // namespace
}  // namespace usersim::agenda
