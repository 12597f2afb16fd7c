#include "usersim/nlu/slot_extractor.h"

#include <algorithm>

#include "string_util.h"
#include "usersim/error.h"
#include "usersim/nlu/tokenizer.h"

namespace usersim::nlu {

using nlohmann::json;

class LexiconBuilder {
 public:
  explicit LexiconBuilder(const Domain& domain) : domain_(domain) {}

  void Add(std::string_view surface, const std::string& slot, const std::string& value) {
    auto tokens = Tokenize(surface);
    if (tokens.empty()) return;
    std::string phrase = internal::Join(tokens, " ");
    auto [it, inserted] = lexicon_.entries_.try_emplace(phrase, ExtractionLexicon::Entry{slot, value});
    if (inserted) {
      lexicon_.max_phrase_len_ = std::max(lexicon_.max_phrase_len_, tokens.size());
      return;
    }
    auto& existing = it->second;
    if (existing.slot == slot && existing.value == value) return;
    ExtractionLexicon::Entry incoming{slot, value};
    bool replace = *domain_.SlotRank(slot) < *domain_.SlotRank(existing.slot);
    const auto& kept = replace ? incoming : existing;
    const auto& dropped = replace ? existing : incoming;
    lexicon_.warnings_.push_back("phrase '" + phrase + "' maps to " + dropped.slot + "=" +
                                 dropped.value + " and " + kept.slot + "=" + kept.value +
                                 "; keeping " + kept.slot + "=" + kept.value);
    if (replace) existing = incoming;
  }

  ExtractionLexicon Finish() { return std::move(lexicon_); }

 private:
  const Domain& domain_;
  ExtractionLexicon lexicon_;
};

const ExtractionLexicon::Entry* ExtractionLexicon::Lookup(std::string_view phrase) const {
  auto it = entries_.find(std::string(phrase));
  return it == entries_.end() ? nullptr : &it->second;
}

void ExtractionLexicon::Scan(
    const std::vector<std::string>& tokens,
    const std::function<void(std::size_t, std::size_t, const Entry*)>& emit) const {
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t longest = std::min(max_phrase_len_, tokens.size() - i);
    const Entry* hit = nullptr;
    std::size_t len = longest;
    for (; len >= 1; --len) {
      std::string phrase = tokens[i];
      for (std::size_t k = 1; k < len; ++k) phrase += " " + tokens[i + k];
      if ((hit = Lookup(phrase))) break;
    }
    if (!hit) len = 1;
    emit(i, len, hit);
    i += len;
  }
}

std::vector<SlotValue> ExtractionLexicon::Extract(std::string_view text) const {
  std::vector<SlotValue> out;
  Scan(Tokenize(text), [&](std::size_t, std::size_t, const Entry* e) {
    if (e) out.push_back({e->slot, e->value});
  });
  return out;
}

std::string ExtractionLexicon::Delexicalize(std::string_view text) const {
  const auto tokens = Tokenize(text);
  std::string out;
  Scan(tokens, [&](std::size_t begin, std::size_t, const Entry* e) {
    if (!out.empty()) out += ' ';
    out += e ? e->slot : tokens[begin];
  });
  return out;
}

json ExtractionLexicon::ToJson() const {
  json entries = json::object();
  for (const auto& [phrase, e] : entries_)
    entries[phrase] = {{"slot", e.slot}, {"value", e.value}};
  return {{"max_phrase_len", max_phrase_len_}, {"entries", entries}};
}

ExtractionLexicon ExtractionLexicon::FromJson(const json& j) {
  ExtractionLexicon lexicon;
  try {
    lexicon.max_phrase_len_ = j.at("max_phrase_len").get<std::size_t>();
    for (const auto& [phrase, e] : j.at("entries").items())
      lexicon.entries_.emplace(phrase, Entry{e.at("slot").get<std::string>(),
                                             e.at("value").get<std::string>()});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, e.what());
  }
  if (lexicon.max_phrase_len_ == 0)
    throw Error(ErrorCode::kMalformedDocument, "max_phrase_len must be positive");
  return lexicon;
}

ExtractionLexicon TrainSlotExtractor(const std::vector<Dialogue>& sample,
                                     const ItemCollection& items, const Domain& domain) {
  LexiconBuilder builder(domain);
  for (const auto& d : sample) {
    for (const auto& u : d.utterances) {
      for (const auto& sv : u.slot_values) {
        if (!domain.HasSlot(sv.slot))
          throw Error(ErrorCode::kUnknownSlot, "dialogue '" + d.dialogue_id +
                                                   "' annotates undeclared slot '" +
                                                   sv.slot + "'");
        builder.Add(sv.value, sv.slot, sv.value);
      }
    }
  }
  if (domain.HasSlot("title"))
    for (const auto& item : items.items()) builder.Add(item.name, "title", item.name);
  for (const auto& item : items.items())
    for (const auto& [slot, values] : item.attributes)
      for (const auto& v : values) builder.Add(v, slot, v);
  return builder.Finish();
}

std::vector<std::string> MentionedSlots(const Domain& domain, std::string_view text) {
  auto tokens = Tokenize(text);
  std::vector<std::string> out;
  for (const auto& slot : domain.slots()) {
    auto slot_tokens = Tokenize(slot);
    if (slot_tokens.empty()) continue;
    auto hit = std::search(tokens.begin(), tokens.end(), slot_tokens.begin(), slot_tokens.end());
    // Accept a trailing plural 's' ("genres", "keywords").
    if (hit == tokens.end() && slot_tokens.size() == 1) {
      hit = std::find(tokens.begin(), tokens.end(), slot_tokens.front() + "s");
    }
    if (hit != tokens.end()) out.push_back(slot);
  }
  return out;
}

}  // namespace usersim::nlu
