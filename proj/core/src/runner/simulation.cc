#include "usersim/runner/simulation.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <thread>

#include "usersim/agenda/interaction_model.h"
#include "usersim/error.h"
#include "usersim/nlg/template_store.h"
#include "usersim/runner/metrics.h"
#include "usersim/runner/mock_agent.h"
#include "usersim/transcript.h"

namespace usersim::runner {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void WriteJson(const json& j, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json ReadJson(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, path.string() + ": " + e.what());
  }
}

void CheckSchema(const json& j, const fs::path& path) {
  if (!j.is_object() || j.value("schema_version", -1) != kModelSchemaVersion)
    throw Error(ErrorCode::kSchemaVersionMismatch,
                path.string() + ": expected schema_version " +
                    std::to_string(kModelSchemaVersion));
}

std::string DescribePersona(const user::Persona& p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "patience=%d,cooperativeness=%g", p.patience,
                p.cooperativeness);
  return buf;
}

}  // namespace

TrainedSimulator TrainSimulator(const std::vector<Dialogue>& sample, const Domain& domain,
                                const ItemCollection& items,
                                const agenda::InteractionModel& interaction,
                                const nlu::IntentClassifierConfig& nlu_config) {
  if (sample.empty()) throw Error(ErrorCode::kEmptyTrainingSet, "annotated sample is empty");
  for (const auto& d : sample)
    for (const auto& u : d.utterances)
      for (const auto& sv : u.slot_values)
        if (!domain.HasSlot(sv.slot))
          throw Error(ErrorCode::kUnknownSlot, "dialogue '" + d.dialogue_id +
                                                   "' annotates undeclared slot '" + sv.slot +
                                                   "'");

  TrainedSimulator t;
  t.interaction = agenda::LearnTransitions(sample, interaction);
  t.user_intents = nlu::TrainIntentClassifier(
      nlu::CollectIntentSamples(sample, Participant::kUser), nlu_config);
  t.lexicon = nlu::TrainSlotExtractor(sample, items, domain);
  // Agent utterances are classified with entities masked, so that a title
  // like "Pride and Prejudice" does not pull a recommendation elsewhere.
  auto agent_samples = nlu::CollectIntentSamples(sample, Participant::kAgent);
  for (auto& s : agent_samples) s.text = t.lexicon.Delexicalize(s.text);
  t.agent_intents = nlu::TrainIntentClassifier(agent_samples, nlu_config);
  if (auto labeled = nlu::CollectSatisfactionSamples(sample); !labeled.empty())
    t.satisfaction = nlu::TrainSatisfactionClassifier(labeled);

  auto defaults = nlg::BuiltinDefaultPatterns();
  for (const auto& [intent, pattern] : interaction.default_templates) defaults[intent] = pattern;
  t.templates = nlg::ExtractTemplates(sample, interaction.user_intents, defaults);
  t.templates.ValidateSlots(domain);
  return t;
}

void SaveModels(const TrainedSimulator& t, const fs::path& dir) {
  fs::create_directories(dir);
  json nlu = {{"schema_version", kModelSchemaVersion},
              {"user_intents", t.user_intents.ToJson()},
              {"agent_intents", t.agent_intents.ToJson()},
              {"lexicon", t.lexicon.ToJson()}};
  if (t.satisfaction) nlu["satisfaction"] = t.satisfaction->ToJson();
  WriteJson(nlu, dir / "nlu.json");

  json nlg = t.templates.ToJson();
  nlg["schema_version"] = kModelSchemaVersion;
  WriteJson(nlg, dir / "nlg.json");

  json im = agenda::InteractionModelToJson(t.interaction);
  im["schema_version"] = kModelSchemaVersion;
  WriteJson(im, dir / "interaction_model.json");
}

TrainedSimulator LoadModels(const fs::path& dir, const Domain& domain) {
  TrainedSimulator t;
  json nlu = ReadJson(dir / "nlu.json");
  CheckSchema(nlu, dir / "nlu.json");
  try {
    t.user_intents = nlu::IntentModel::FromJson(nlu.at("user_intents"));
    t.agent_intents = nlu::IntentModel::FromJson(nlu.at("agent_intents"));
    t.lexicon = nlu::ExtractionLexicon::FromJson(nlu.at("lexicon"));
    if (nlu.contains("satisfaction"))
      t.satisfaction = nlu::SatisfactionModel::FromJson(nlu.at("satisfaction"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, (dir / "nlu.json").string() + ": " + e.what());
  }

  json nlg = ReadJson(dir / "nlg.json");
  CheckSchema(nlg, dir / "nlg.json");
  t.templates = nlg::TemplateStore::FromJson(nlg);
  t.templates.ValidateSlots(domain);

  json im = ReadJson(dir / "interaction_model.json");
  CheckSchema(im, dir / "interaction_model.json");
  t.interaction = agenda::ParseInteractionModel(im, domain);
  if (t.interaction.transitions.empty())
    throw Error(ErrorCode::kMalformedDocument, "interaction model has no learned transitions");
  return t;
}

void SimulationConfig::Validate() const {
  if (max_turns < 2) throw Error(ErrorCode::kInvalidConfig, "max_turns must be >= 2");
  if (parallelism < 1) throw Error(ErrorCode::kInvalidConfig, "parallelism must be >= 1");
  scale.Validate();
  std::vector<std::pair<const char*, const fs::path*>> inputs{
      {"domain", &domain}, {"items", &items}, {"ratings", &ratings}, {"population", &population}};
  if (train) {
    inputs.emplace_back("interaction-model", &interaction_model);
    inputs.emplace_back("sample", &sample);
  }
  for (const auto& [name, path] : inputs) {
    if (path->empty())
      throw Error(ErrorCode::kInvalidConfig, std::string("missing --") + name);
    std::ifstream probe(*path);
    if (!probe)
      throw Error(ErrorCode::kIoError,
                  std::string("--") + name + ": cannot read '" + path->string() + "'");
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidConfig, "missing --out");
}

json SimulationConfig::ToJson() const {
  json j = {{"domain", domain.string()},
            {"items", items.string()},
            {"ratings", ratings.string()},
            {"interaction_model", interaction_model.string()},
            {"sample", sample.string()},
            {"population", population.string()},
            {"agent", agent},
            {"max_turns", max_turns},
            {"rating_scale", {scale.min, scale.max}},
            {"parallelism", parallelism},
            {"agent_timeout_ms", agent_timeout.count()},
            {"agent_retries", agent_retries}};
  j["seed"] = seed ? json(*seed) : json(nullptr);
  return j;
}

SimulationConfig SimulationConfig::FromJson(const json& j) {
  SimulationConfig c;
  try {
    c.domain = j.value("domain", std::string());
    c.items = j.value("items", std::string());
    c.ratings = j.value("ratings", std::string());
    c.interaction_model = j.value("interaction_model", std::string());
    c.sample = j.value("sample", std::string());
    c.population = j.value("population", std::string());
    c.agent = j.value("agent", std::string("mock"));
    c.max_turns = j.value("max_turns", 30);
    if (j.contains("rating_scale")) {
      auto s = j.at("rating_scale").get<std::vector<double>>();
      if (s.size() != 2) throw Error(ErrorCode::kInvalidConfig, "rating_scale needs [min,max]");
      c.scale = {s[0], s[1]};
    }
    c.parallelism = j.value("parallelism", 1);
    c.agent_timeout = std::chrono::milliseconds(j.value("agent_timeout_ms", 5000));
    c.agent_retries = j.value("agent_retries", 2);
    if (j.contains("seed") && !j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("config snapshot: ") + e.what());
  }
  return c;
}

AgentFactory MockAgentFactory(std::shared_ptr<const ItemCollection> items) {
  return [items](const std::string&) -> std::unique_ptr<DialogueParticipant> {
    return std::make_unique<MockAgent>(items);
  };
}

AgentFactory WireAgentFactory(AgentEndpoint endpoint) {
  endpoint.Validate();
  return [endpoint](const std::string& session_id) -> std::unique_ptr<DialogueParticipant> {
    return std::make_unique<WireAgent>(endpoint, session_id);
  };
}

std::vector<Dialogue> SimulateDialogues(std::shared_ptr<const agenda::SimulatorModels> models,
                                        std::vector<user::UserProfile> population,
                                        const AgentFactory& agents, const RunOptions& options) {
  std::sort(population.begin(), population.end(),
            [](const auto& a, const auto& b) { return a.user_id < b.user_id; });
  std::vector<Dialogue> dialogues(population.size());

  auto run_one = [&](std::size_t i) {
    user::UserProfile& profile = population[i];
    const std::string dialogue_id = "dlg-" + profile.user_id;
    std::map<std::string, std::string> meta{
        {std::string(metadata_keys::kSeed), std::to_string(profile.seed)},
        {std::string(metadata_keys::kPersona), DescribePersona(profile.persona)},
        {std::string(metadata_keys::kContext), profile.context.Describe()},
    };
    if (!profile.grounded_on.empty()) meta["grounded_on"] = profile.grounded_on;

    agenda::SimulatedUser user(models, std::move(profile), options.simulator);
    Dialogue d;
    try {
      auto agent = agents(dialogue_id);
      d = ConnectDialogue(user, *agent, {dialogue_id, options.max_turns});
    } catch (const Error& e) {
      // Isolate the failure to this dialogue.
      d.dialogue_id = dialogue_id;
      d.user_id = user.id();
      d.metadata[std::string(metadata_keys::kAborted)] = "true";
      d.metadata[std::string(metadata_keys::kAbortCause)] = e.what();
      d.metadata[std::string(metadata_keys::kTerminatedBy)] = "aborted";
    }
    d.metadata.insert(meta.begin(), meta.end());
    d.metadata["final_satisfaction"] = std::to_string(user.profile().context.satisfaction);
    bool success = false;
    for (const auto& u : d.utterances)
      success |= u.participant == Participant::kUser && u.intent == options.accept_intent;
    d.metadata[std::string(metadata_keys::kOutcome)] = success ? "SUCCESS" : "FAILURE";
    dialogues[i] = std::move(d);
  };

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(options.parallelism, 1)),
                            std::max<std::size_t>(population.size(), 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < population.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < population.size(); i = next++) run_one(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return dialogues;
}

fs::path RunSimulation(const SimulationConfig& config) {
  config.Validate();
  Domain domain = LoadDomainConfig(config.domain);
  auto items = std::make_shared<ItemCollection>(LoadItemCollection(config.items, domain));
  auto ratings = LoadRatings(config.ratings, config.scale);
  auto population_config = user::LoadPopulationConfig(config.population);
  if (config.seed) population_config.seed = *config.seed;

  fs::create_directories(config.out);
  const fs::path models_dir = config.out / "models";
  TrainedSimulator trained;
  if (config.train) {
    auto interaction = agenda::LoadInteractionModel(config.interaction_model, domain);
    trained = TrainSimulator(ImportDialogues(config.sample), domain, *items, interaction);
    SaveModels(trained, models_dir);
  } else {
    trained = LoadModels(models_dir, domain);
  }

  auto population =
      user::GeneratePopulation(population_config, ratings, *items, config.scale, domain);

  auto models = std::make_shared<agenda::SimulatorModels>(agenda::SimulatorModels{
      domain, *items, trained.interaction, trained.agent_intents, trained.lexicon,
      trained.templates});

  AgentFactory agents;
  if (config.agent == "mock") {
    agents = MockAgentFactory(items);
  } else {
    agents = WireAgentFactory({config.agent, config.agent_timeout, config.agent_retries});
  }

  RunOptions options;
  options.max_turns = config.max_turns;
  options.parallelism = config.parallelism;
  options.accept_intent = trained.interaction.accept_intent;
  auto dialogues = SimulateDialogues(models, std::move(population), agents, options);

  const fs::path transcripts = config.out / "transcripts.json";
  ExportDialogues(dialogues, transcripts);

  json snapshot = config.ToJson();
  snapshot["master_seed"] = population_config.seed;
  snapshot["population_config"] = user::PopulationConfigToJson(population_config);
  WriteJson(snapshot, config.out / "config-snapshot.json");
  return transcripts;
}

}  // namespace usersim::runner
