#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "usersim/agenda/simulated_user.h"
#include "usersim/connector.h"
#include "usersim/domain.h"
#include "usersim/items.h"
#include "usersim/nlu/intent_classifier.h"
#include "usersim/nlu/satisfaction.h"
#include "usersim/ratings.h"
#include "usersim/runner/wire.h"
#include "usersim/user/population.h"

namespace usersim::runner {

inline constexpr int kModelSchemaVersion = 1;

// Output of training on an annotated sample.
struct TrainedSimulator {
  agenda::InteractionModel interaction;  // with learned transitions
  nlu::IntentModel user_intents;
  nlu::IntentModel agent_intents;  // over lexicon-delexicalized text
  nlu::ExtractionLexicon lexicon;
  std::optional<nlu::SatisfactionModel> satisfaction;  // when the sample is labeled
  nlg::TemplateStore templates;
};

TrainedSimulator TrainSimulator(const std::vector<Dialogue>& sample, const Domain& domain,
                                const ItemCollection& items,
                                const agenda::InteractionModel& interaction,
                                const nlu::IntentClassifierConfig& nlu_config = {});

// models/nlu.json, models/nlg.json, models/interaction_model.json
void SaveModels(const TrainedSimulator& trained, const std::filesystem::path& models_dir);
TrainedSimulator LoadModels(const std::filesystem::path& models_dir, const Domain& domain);

struct SimulationConfig {
  std::filesystem::path domain;
  std::filesystem::path items;
  std::filesystem::path ratings;
  std::filesystem::path interaction_model;
  std::filesystem::path sample;
  std::filesystem::path population;
  std::string agent = "mock";  // "mock" or a base URL
  int max_turns = 30;
  std::optional<std::uint64_t> seed;  // overrides the population seed
  std::filesystem::path out;
  RatingScale scale;
  int parallelism = 1;
  bool train = false;  // train first instead of loading models/
  std::chrono::milliseconds agent_timeout{5000};
  int agent_retries = 2;

  // Throws Error(kInvalidConfig) for max_turns < 2 or parallelism < 1, and
  // Error(kIoError) for unreadable input files.
  void Validate() const;
  nlohmann::json ToJson() const;
  static SimulationConfig FromJson(const nlohmann::json& j);
};

// Creates the agent side of one session.
using AgentFactory =
    std::function<std::unique_ptr<DialogueParticipant>(const std::string& session_id)>;

AgentFactory MockAgentFactory(std::shared_ptr<const ItemCollection> items);
AgentFactory WireAgentFactory(AgentEndpoint endpoint);

struct RunOptions {
  int max_turns = 30;
  int parallelism = 1;
  agenda::SimulatorOptions simulator;
  Intent accept_intent{"ACCEPT"};
};

// One dialogue per profile, ordered by user_id whatever the parallelism.
// Dialogue metadata records the profile seed, persona, initial context,
// grounding user, final satisfaction and SUCCESS/FAILURE outcome.
std::vector<Dialogue> SimulateDialogues(std::shared_ptr<const agenda::SimulatorModels> models,
                                        std::vector<user::UserProfile> population,
                                        const AgentFactory& agents, const RunOptions& options);

// Full run: load inputs, train or load models, generate the population,
// simulate and write transcripts.json and config-snapshot.json under
// config.out. Returns the transcript path.
std::filesystem::path RunSimulation(const SimulationConfig& config);

}  // namespace usersim::runner
