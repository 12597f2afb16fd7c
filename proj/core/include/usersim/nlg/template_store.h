#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "usersim/dialogue.h"
#include "usersim/domain.h"
#include "usersim/rng.h"
#include "usersim/user/context.h"

namespace usersim::nlg {

enum class Polarity { kPositive, kNegative, kNeutral };
enum class SatisfactionBucket { kLow, kMid, kHigh, kAny };

std::string_view ToString(Polarity p);
std::string_view ToString(SatisfactionBucket b);

// LOW for 1-2, MID for 3, HIGH for 4-5.
SatisfactionBucket BucketFor(int satisfaction);

// NEGATIVE if any word is in {not, don't, dont, hate, dislike, no}, else
// POSITIVE if any is in {like, love, want}, else NEUTRAL.
Polarity PolarityOf(std::string_view pattern);

struct Template {
  Intent intent;
  std::string pattern;          // text with {slot} placeholders
  std::set<std::string> slots;  // exactly the placeholders in `pattern`
  Polarity polarity = Polarity::kNeutral;
  SatisfactionBucket bucket = SatisfactionBucket::kAny;
  int length = 0;  // token count of `pattern`
  bool is_default = false;

  friend bool operator==(const Template&, const Template&) = default;
};

// Builds a template, deriving slots and length from the pattern. Throws
// Error(kMalformedDocument) on unbalanced braces.
Template MakeTemplate(Intent intent, std::string pattern, Polarity polarity,
                      SatisfactionBucket bucket, bool is_default = false);

// Placeholder names in `pattern`, in order of appearance.
std::vector<std::string> Placeholders(std::string_view pattern);

// Built-in fallback patterns for the crsv1 intents.
std::map<std::string, std::string> BuiltinDefaultPatterns();

class TemplateStore {
 public:
  // Ignores an entry equal in (intent, pattern, polarity, bucket, length)
  // to one already stored. Returns whether it was added.
  bool Add(Template t);

  const std::vector<Template>& For(const Intent& intent) const;
  bool Covers(const Intent& intent) const;
  std::vector<Intent> Intents() const;
  std::size_t size() const;

  void SetDefaultPattern(const Intent& intent, std::string pattern);
  const std::map<Intent, std::string>& default_patterns() const { return defaults_; }
  // The default for `intent` voicing exactly `slots`.
  Template DefaultTemplate(const Intent& intent, const std::set<std::string>& slots) const;

  // Throws Error(kUnknownSlot) if a placeholder is not a domain slot.
  void ValidateSlots(const Domain& domain) const;

  nlohmann::json ToJson() const;
  static TemplateStore FromJson(const nlohmann::json& j);

 private:
  std::map<Intent, std::vector<Template>> templates_;
  std::map<Intent, std::string> defaults_;
};

// Harvests one template per annotated user utterance by replacing each
// annotated value's first occurrence in the text with {slot}. Identical
// entries are stored once. Every intent in `cover` that ends up without a
// template receives a slot-free default from `default_patterns`.
TemplateStore ExtractTemplates(
    const std::vector<Dialogue>& sample, const std::vector<Intent>& cover = {},
    const std::map<std::string, std::string>& default_patterns = BuiltinDefaultPatterns());

struct Selection {
  Template chosen;
  int stage = 1;  // 1..5, the cascade stage that produced `chosen`
};

// Candidate filter cascade, relaxing one constraint per stage until some
// template survives:
//   1. slots cover `needed_slots`, polarity, satisfaction bucket and (at
//      night or in a group) the shorter half by median length
//   2. without the length preference
//   3. without the satisfaction bucket
//   4. without polarity
//   5. the default template for (intent, needed_slots)
// The bucket filter admits the context's bucket and ANY, preferring exact
// matches when there are any. The length median is taken over the
// candidates that pass the other stage-1 filters. A nullopt polarity does
// not filter. Ties are broken uniformly with `rng`, which is not drawn
// from when a single candidate survives.
Selection SelectTemplate(const TemplateStore& store, const Intent& intent,
                         const std::set<std::string>& needed_slots,
                         std::optional<Polarity> polarity,
                         const user::ContextState& context, Rng& rng);

// Throws Error(kMissingSlotValue) if a placeholder has no value.
std::string Instantiate(const Template& t,
                        const std::map<std::string, std::string>& slot_values);

}  // namespace usersim::nlg
