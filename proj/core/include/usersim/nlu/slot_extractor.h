#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "usersim/dialogue.h"
#include "usersim/domain.h"
#include "usersim/items.h"

namespace usersim::nlu {

// Gazetteer mapping lowercased token phrases to canonical slot values.
class ExtractionLexicon {
 public:
  struct Entry {
    std::string slot;
    std::string value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  // Phrase keys are token sequences joined by single spaces.
  const std::map<std::string, Entry>& entries() const { return entries_; }
  std::size_t max_phrase_len() const { return max_phrase_len_; }
  // Collisions resolved during training.
  const std::vector<std::string>& warnings() const { return warnings_; }

  const Entry* Lookup(std::string_view phrase) const;

  // Greedy longest match, left to right; spans never overlap.
  std::vector<SlotValue> Extract(std::string_view text) const;
  // Tokenized text with every matched phrase replaced by its slot name, so
  // "How about Pride and Prejudice?" reads "how about title".
  std::string Delexicalize(std::string_view text) const;

  nlohmann::json ToJson() const;
  static ExtractionLexicon FromJson(const nlohmann::json& j);

 private:
  friend class LexiconBuilder;

  void Scan(const std::vector<std::string>& tokens,
            const std::function<void(std::size_t, std::size_t, const Entry*)>& emit) const;

  std::map<std::string, Entry> entries_;
  std::size_t max_phrase_len_ = 1;
  std::vector<std::string> warnings_;
};

// Harvests annotated slot values from the sample, item names (slot `title`,
// when the domain declares it) and item attribute values. When one phrase
// maps to different values, the slot declared earlier in the domain wins
// and a warning is recorded.
//
// Throws Error(kUnknownSlot) if an annotation names an undeclared slot.
ExtractionLexicon TrainSlotExtractor(const std::vector<Dialogue>& sample,
                                     const ItemCollection& items,
                                     const Domain& domain);

// Domain slots whose name appears as a token phrase in `text`, e.g. "genre"
// in "Which genre do you like?". Used to detect what an agent elicits.
std::vector<std::string> MentionedSlots(const Domain& domain, std::string_view text);

}  // namespace usersim::nlu
