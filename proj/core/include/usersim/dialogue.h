#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace usersim {

// A dialogue-act label. Labels compare by exact string match.
class Intent {
 public:
  Intent() = default;
  explicit Intent(std::string label) : label_(std::move(label)) {}

  const std::string& label() const { return label_; }
  bool empty() const { return label_.empty(); }

  friend bool operator==(const Intent&, const Intent&) = default;
  friend auto operator<=>(const Intent&, const Intent&) = default;

 private:
  std::string label_;
};

struct SlotValue {
  std::string slot;
  std::string value;

  friend bool operator==(const SlotValue&, const SlotValue&) = default;
  friend auto operator<=>(const SlotValue&, const SlotValue&) = default;
};

enum class Participant { kUser, kAgent };

std::string_view ParticipantName(Participant p);
std::optional<Participant> ParseParticipant(std::string_view name);

// One utterance, optionally annotated. An utterance is "annotated" when it
// carries an intent; slot values and satisfaction only make sense then.
struct Utterance {
  Participant participant = Participant::kUser;
  std::string text;
  int turn_index = 0;
  std::optional<Intent> intent;
  std::vector<SlotValue> slot_values;
  std::optional<int> satisfaction;

  bool annotated() const { return intent.has_value(); }

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

namespace metadata_keys {
inline constexpr std::string_view kSeed = "seed";
inline constexpr std::string_view kContext = "context";
inline constexpr std::string_view kPersona = "persona";
inline constexpr std::string_view kOutcome = "outcome";
inline constexpr std::string_view kTerminatedBy = "terminated_by";
inline constexpr std::string_view kAborted = "aborted";
inline constexpr std::string_view kAbortCause = "abort_cause";
}  // namespace metadata_keys

struct Dialogue {
  std::string dialogue_id;
  std::string agent_id;
  std::string user_id;
  std::vector<Utterance> utterances;
  std::map<std::string, std::string> metadata;

  std::size_t CountUtterances(Participant p) const;

  friend bool operator==(const Dialogue&, const Dialogue&) = default;
};

// Throws Error(kInvalidDialogue) when the id is empty, turn indices do not
// strictly increase, participants do not alternate, satisfaction appears on
// an agent utterance or outside [1,5], or the outcome flag is not
// SUCCESS/FAILURE.
void ValidateDialogue(const Dialogue& dialogue);

}  // namespace usersim

template <>
struct std::hash<usersim::Intent> {
  std::size_t operator()(const usersim::Intent& intent) const noexcept {
    return std::hash<std::string>{}(intent.label());
  }
};
