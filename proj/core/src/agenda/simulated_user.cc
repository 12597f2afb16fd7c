#include "usersim/agenda/simulated_user.h"

#include <cmath>

#include "usersim/error.h"

namespace usersim::agenda {

SimulatedUser::SimulatedUser(std::shared_ptr<const SimulatorModels> models,
                             user::UserProfile profile, SimulatorOptions options)
    : models_(std::move(models)),
      profile_(std::move(profile)),
      options_(options),
      rng_(DeriveSeed(profile_.seed, 2)) {
  agenda_ = InitializeAgenda(models_->interaction, rng_, options_.agenda_cap);
}

Reply SimulatedUser::Open() { return Respond(""); }

std::set<std::string> SimulatedUser::SlotsToVoice(
    const Intent& intent, const std::vector<std::string>& elicited) const {
  const auto& required = models_->interaction.RequiredSlots(intent);
  if (required.empty()) return {};
  std::set<std::string> slots;
  for (const auto& s : elicited)
    if (s != "title") slots.insert(s);
  if (slots.empty()) slots.insert(required.begin(), required.end());
  return slots;
}

std::optional<std::pair<std::string, double>> SimulatedUser::ChooseValue(
    const std::string& slot) {
  // Strongest known preference, favouring values not yet voiced in this
  // dialogue.
  auto known = profile_.preferences.KnownValues(slot);
  const std::pair<std::string, double>* best = nullptr;
  const std::pair<std::string, double>* best_fresh = nullptr;
  for (const auto& kv : known) {
    if (!best || std::abs(kv.second) > std::abs(best->second)) best = &kv;
    if (!disclosed_.contains({slot, kv.first}) &&
        (!best_fresh || std::abs(kv.second) > std::abs(best_fresh->second)))
      best_fresh = &kv;
  }
  if (best_fresh) return *best_fresh;

  // Nothing fresh in the graph: pick an unvoiced value from the collection
  // and let the graph materialize a preference for it.
  std::vector<std::string> candidates;
  for (const auto& v : models_->items.DistinctValues(slot))
    if (!disclosed_.contains({slot, v})) candidates.push_back(v);
  if (!candidates.empty()) {
    const auto& v = candidates[rng_.Index(candidates.size())];
    return std::make_pair(v, profile_.preferences.GetAttributePreference(slot, v));
  }
  if (best) return *best;
  return std::nullopt;
}

void SimulatedUser::FillSlot(const std::string& slot, Filled& filled) {
  if (filled.values.contains(slot)) return;
  if (slot == "title") {
    if (last_recommended_title_) {
      filled.values[slot] = *last_recommended_title_;
      filled.ordered.push_back({slot, *last_recommended_title_});
    }
    return;
  }
  auto choice = ChooseValue(slot);
  if (!choice) return;
  filled.values[slot] = choice->first;
  filled.ordered.push_back({slot, choice->first});
  if (!filled.first_weight) filled.first_weight = choice->second;
}

Reply SimulatedUser::Respond(std::string_view agent_utterance) {
  const SimulatorModels& m = *models_;
  if (finished_) return Reply{"", true, {}, {}, profile_.context.satisfaction};

  TurnTrace trace;
  auto prediction = m.agent_intents.Classify(m.lexicon.Delexicalize(agent_utterance));
  trace.agent_intent = prediction.intent;
  trace.agent_similarity = prediction.similarity;
  auto agent_slots = m.lexicon.Extract(agent_utterance);
  auto elicited = nlu::MentionedSlots(m.domain, agent_utterance);

  const bool expected = !agenda_.last_action ||
                        m.interaction.IsExpected(*agenda_.last_action, prediction.intent);

  // A recommendation pre-empts the agenda with an accept/reject decision
  // that follows the user's preference for the recommended item.
  std::optional<user::SatisfactionEvent> recommendation_event;
  if (expected && m.interaction.IsRecommendation(prediction.intent)) {
    for (const auto& sv : agent_slots) {
      if (sv.slot != "title") continue;
      const Item* item = m.items.FindByName(sv.value);
      std::string key = item ? item->item_id : sv.value;
      double weight = profile_.preferences.GetItemPreference(key);
      last_recommended_title_ = item ? item->name : sv.value;
      bool good = weight >= 0.0;
      agenda_.Push(good ? m.interaction.accept_intent : m.interaction.reject_intent);
      recommendation_event = good ? user::SatisfactionEvent::kGoodRecommendation
                                  : user::SatisfactionEvent::kBadRecommendation;
      break;
    }
  }

  UserAction action = NextUserAction(agenda_, prediction.intent, m.interaction,
                                     profile_.persona, profile_.context, rng_);
  profile_.context = user::UpdateSatisfaction(profile_.context, action.event);
  if (recommendation_event)
    profile_.context = user::UpdateSatisfaction(profile_.context, *recommendation_event);

  // Slot filling. A repeated action repeats its slot values verbatim.
  Filled filled;
  std::set<std::string> needed;
  if (action.branch == ActionBranch::kRepeated && !last_slot_values_.empty()) {
    for (const auto& sv : last_slot_values_) {
      if (filled.values.emplace(sv.slot, sv.value).second) {
        filled.ordered.push_back(sv);
        needed.insert(sv.slot);
        if (!filled.first_weight && sv.slot != "title")
          filled.first_weight = profile_.preferences.GetAttributePreference(sv.slot, sv.value);
      }
    }
  } else {
    for (const auto& slot : SlotsToVoice(action.intent, elicited)) {
      FillSlot(slot, filled);
      if (filled.values.contains(slot)) needed.insert(slot);
    }
  }

  std::optional<nlg::Polarity> polarity;
  if (filled.first_weight)
    polarity = *filled.first_weight >= 0.0 ? nlg::Polarity::kPositive : nlg::Polarity::kNegative;

  auto selection = nlg::SelectTemplate(m.templates, action.intent, needed, polarity,
                                       profile_.context, rng_);
  for (const auto& slot : selection.chosen.slots) FillSlot(slot, filled);
  std::string text;
  try {
    text = nlg::Instantiate(selection.chosen, filled.values);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kMissingSlotValue) throw;
    selection = {m.templates.DefaultTemplate(action.intent, needed), 5};
    text = nlg::Instantiate(selection.chosen, filled.values);
  }

  // Only the values the final template voices are reported.
  std::vector<SlotValue> voiced;
  for (const auto& sv : filled.ordered)
    if (selection.chosen.slots.contains(sv.slot)) voiced.push_back(sv);
  for (const auto& sv : voiced) disclosed_.insert({sv.slot, sv.value});
  last_slot_values_ = voiced;

  trace.user_intent = action.intent;
  trace.branch = action.branch;
  trace.satisfaction = profile_.context.satisfaction;
  trace.template_stage = selection.stage;
  trace.template_bucket = selection.chosen.bucket;
  trace.slot_values = voiced;
  trace_.push_back(std::move(trace));

  Reply reply;
  reply.text = std::move(text);
  reply.intent = action.intent;
  reply.slot_values = std::move(voiced);
  reply.satisfaction = profile_.context.satisfaction;
  reply.terminate = action.intent == m.interaction.terminal_intent;
  finished_ = reply.terminate;
  return reply;
}

}  // namespace usersim::agenda
