// usersimcrs: train a user simulator on an annotated sample, run it against
// a conversational recommender and score the resulting transcripts.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "usersim/agenda/interaction_model.h"
#include "usersim/domain.h"
#include "usersim/error.h"
#include "usersim/items.h"
#include "usersim/runner/metrics.h"
#include "usersim/runner/mock_agent.h"
#include "usersim/runner/simulation.h"
#include "usersim/transcript.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace usersim;

namespace {

struct Paths {
  std::string domain, items, ratings, interaction_model, sample, population, out;
  std::string agent = "mock";
  int max_turns = 30;
  std::optional<std::uint64_t> seed;
};

json ReadJsonFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, path.string() + ": " + e.what());
  }
}

void WriteJsonFile(const json& j, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void RequirePath(const std::string& value, const char* flag) {
  if (value.empty()) throw Error(ErrorCode::kInvalidConfig, std::string("missing ") + flag);
}

// Fills unset paths from a snapshot left by an earlier train/simulate in the
// same output directory.
void FillFromSnapshot(Paths& p) {
  const fs::path snapshot = fs::path(p.out) / "config-snapshot.json";
  if (p.out.empty() || !fs::exists(snapshot)) return;
  json j = ReadJsonFile(snapshot);
  auto fill = [&](std::string& field, const char* key) {
    if (field.empty() && j.contains(key) && j[key].is_string()) field = j[key].get<std::string>();
  };
  fill(p.domain, "domain");
  fill(p.items, "items");
  fill(p.ratings, "ratings");
  fill(p.interaction_model, "interaction_model");
  fill(p.sample, "sample");
  fill(p.population, "population");
}

int RunTrain(const Paths& p) {
  RequirePath(p.domain, "--domain");
  RequirePath(p.items, "--items");
  RequirePath(p.interaction_model, "--interaction-model");
  RequirePath(p.sample, "--sample");
  RequirePath(p.out, "--out");
  Domain domain = LoadDomainConfig(p.domain);
  ItemCollection items = LoadItemCollection(p.items, domain);
  auto interaction = agenda::LoadInteractionModel(p.interaction_model, domain);
  auto sample = ImportDialogues(p.sample);
  auto trained = runner::TrainSimulator(sample, domain, items, interaction);
  const fs::path out(p.out);
  fs::create_directories(out);
  runner::SaveModels(trained, out / "models");

  json snapshot = {{"domain", p.domain},
                   {"items", p.items},
                   {"interaction_model", p.interaction_model},
                   {"sample", p.sample}};
  WriteJsonFile(snapshot, out / "config-snapshot.json");

  std::cout << "trained on " << sample.size() << " dialogues: "
            << trained.user_intents.Intents().size() << " user intents, "
            << trained.agent_intents.Intents().size() << " agent intents, "
            << trained.templates.size() << " templates -> " << (out / "models").string()
            << '\n';
  return 0;
}

int RunSimulate(Paths p, int parallelism, bool train, double rating_min, double rating_max,
                int timeout_ms, int retries) {
  RequirePath(p.out, "--out");
  FillFromSnapshot(p);
  runner::SimulationConfig c;
  c.domain = p.domain;
  c.items = p.items;
  c.ratings = p.ratings;
  c.interaction_model = p.interaction_model;
  c.sample = p.sample;
  c.population = p.population;
  c.agent = p.agent;
  c.max_turns = p.max_turns;
  c.seed = p.seed;
  c.out = p.out;
  c.scale = {rating_min, rating_max};
  c.parallelism = parallelism;
  c.train = train;
  c.agent_timeout = std::chrono::milliseconds(timeout_ms);
  c.agent_retries = retries;
  if (!train && !fs::exists(fs::path(p.out) / "models" / "nlu.json"))
    throw Error(ErrorCode::kIoError, "no trained models under " +
                                         (fs::path(p.out) / "models").string() +
                                         "; run `train` first or pass --train");
  auto transcripts = runner::RunSimulation(c);
  auto dialogues = ImportDialogues(transcripts);
  std::cout << "simulated " << dialogues.size() << " dialogues -> " << transcripts.string()
            << '\n';
  return 0;
}

int RunEvaluate(const Paths& p, const std::string& transcripts_flag) {
  fs::path transcripts = transcripts_flag;
  if (transcripts.empty()) {
    RequirePath(p.out, "--out or --transcripts");
    transcripts = fs::path(p.out) / "transcripts.json";
  }
  auto report = runner::Evaluate(ImportDialogues(transcripts));
  json j = report.ToJson();
  if (!p.out.empty()) {
    fs::create_directories(p.out);
    WriteJsonFile(j, fs::path(p.out) / "report.json");
  }
  std::cout << "n_dialogues " << report.n_dialogues << "\navg_turns " << report.avg_turns
            << "\navg_success " << report.avg_success << '\n';
  return 0;
}

int RunAnnotate(const Paths& p, const std::string& input, const std::string& output) {
  RequirePath(p.domain, "--domain");
  RequirePath(p.out, "--out");
  RequirePath(input, "--input");
  Domain domain = LoadDomainConfig(p.domain);
  auto trained = runner::LoadModels(fs::path(p.out) / "models", domain);
  if (!trained.satisfaction)
    throw Error(ErrorCode::kInvalidConfig,
                "trained models carry no satisfaction classifier (sample had no labels)");
  auto dialogues = ImportDialogues(input);
  int labeled = 0;
  for (auto& d : dialogues)
    for (auto& u : d.utterances)
      if (u.participant == Participant::kUser && !u.satisfaction) {
        u.satisfaction = trained.satisfaction->Predict(u.text);
        ++labeled;
      }
  fs::path dest = output.empty() ? fs::path(input) : fs::path(output);
  ExportDialogues(dialogues, dest);
  std::cout << "pre-labeled " << labeled << " user utterances -> " << dest.string() << '\n';
  return 0;
}

int RunMockServer(const Paths& p, const std::string& host, int port) {
  RequirePath(p.domain, "--domain");
  RequirePath(p.items, "--items");
  Domain domain = LoadDomainConfig(p.domain);
  auto items = std::make_shared<ItemCollection>(LoadItemCollection(p.items, domain));
  runner::MockAgentServer server(items);
  std::cout << "mock CRS listening on " << host << ':' << port << std::endl;
  server.Listen(host, port);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agenda-based user simulation for conversational recommender systems"};
  app.require_subcommand(1);

  Paths p;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--domain", p.domain, "Domain config (slot names)");
    sub->add_option("--items", p.items, "Item collection");
    sub->add_option("--out", p.out, "Run artifact directory");
    sub->add_option("--seed", p.seed, "Master seed (overrides the population seed)");
  };

  auto* train = app.add_subcommand("train", "Train NLU, NLG and transitions on an annotated sample");
  add_common(train);
  train->add_option("--interaction-model", p.interaction_model, "Interaction model config");
  train->add_option("--sample", p.sample, "Annotated dialogue sample");

  int parallelism = 1, timeout_ms = 5000, retries = 2;
  bool do_train = false;
  double rating_min = 1.0, rating_max = 5.0;
  auto* simulate = app.add_subcommand("simulate", "Simulate one dialogue per generated user");
  add_common(simulate);
  simulate->add_option("--ratings", p.ratings, "Ratings file (user_id,item_id,rating)");
  simulate->add_option("--population", p.population, "Population config");
  simulate->add_option("--agent", p.agent, "Agent base URL, or `mock`");
  simulate->add_option("--max-turns", p.max_turns, "Cap on user turns per dialogue");
  simulate->add_option("--interaction-model", p.interaction_model,
                       "Interaction model config (with --train)");
  simulate->add_option("--sample", p.sample, "Annotated dialogue sample (with --train)");
  simulate->add_flag("--train", do_train, "Train before simulating");
  simulate->add_option("--parallelism", parallelism, "Concurrent dialogues");
  simulate->add_option("--rating-min", rating_min, "Lower end of the rating scale");
  simulate->add_option("--rating-max", rating_max, "Upper end of the rating scale");
  simulate->add_option("--agent-timeout-ms", timeout_ms, "Per-request timeout");
  simulate->add_option("--agent-retries", retries, "Retries on transport failure");

  std::string transcripts;
  auto* evaluate = app.add_subcommand("evaluate", "Compute AvgTurns and AvgSuccess");
  add_common(evaluate);
  evaluate->add_option("--transcripts", transcripts,
                       "Transcript document (default: <out>/transcripts.json)");

  std::string input, output;
  auto* annotate =
      app.add_subcommand("annotate", "Pre-label user satisfaction on collected dialogues");
  add_common(annotate);
  annotate->add_option("--input", input, "Dialogue document to label");
  annotate->add_option("--output", output, "Destination (default: overwrite --input)");

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* mock = app.add_subcommand("mock-server", "Serve the bundled mock CRS over HTTP");
  add_common(mock);
  mock->add_option("--host", host, "Bind address");
  mock->add_option("--port", port, "Bind port");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) return RunTrain(p);
    if (*simulate)
      return RunSimulate(p, parallelism, do_train, rating_min, rating_max, timeout_ms, retries);
    if (*evaluate) return RunEvaluate(p, transcripts);
    if (*annotate) return RunAnnotate(p, input, output);
    if (*mock) return RunMockServer(p, host, port);
  } catch (const Error& e) {
    std::cerr << "usersimcrs: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "usersimcrs: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
