#include "usersim/nlg/template_store.h"

#include <algorithm>
#include <cctype>

#include "string_util.h"
#include "usersim/error.h"
#include "usersim/nlu/tokenizer.h"

namespace usersim::nlg {

using nlohmann::json;

std::string_view ToString(Polarity p) {
  switch (p) {
    case Polarity::kPositive: return "POSITIVE";
    case Polarity::kNegative: return "NEGATIVE";
    case Polarity::kNeutral: return "NEUTRAL";
  }
  return "";
}

std::string_view ToString(SatisfactionBucket b) {
  switch (b) {
    case SatisfactionBucket::kLow: return "LOW";
    case SatisfactionBucket::kMid: return "MID";
    case SatisfactionBucket::kHigh: return "HIGH";
    case SatisfactionBucket::kAny: return "ANY";
  }
  return "";
}

namespace {

Polarity ParsePolarity(const std::string& s) {
  for (auto p : {Polarity::kPositive, Polarity::kNegative, Polarity::kNeutral})
    if (ToString(p) == s) return p;
  throw Error(ErrorCode::kMalformedDocument, "unknown polarity '" + s + "'");
}

SatisfactionBucket ParseBucket(const std::string& s) {
  for (auto b : {SatisfactionBucket::kLow, SatisfactionBucket::kMid,
                 SatisfactionBucket::kHigh, SatisfactionBucket::kAny})
    if (ToString(b) == s) return b;
  throw Error(ErrorCode::kMalformedDocument, "unknown satisfaction bucket '" + s + "'");
}

// Lowercased whitespace-separated words with surrounding punctuation
// stripped; apostrophes survive so "don't" stays one word.
std::vector<std::string> PolarityWords(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  auto flush = [&] {
    auto is_edge = [](unsigned char c) { return !std::isalnum(c) && c != '\'' && c < 0x80; };
    std::size_t b = 0, e = current.size();
    while (b < e && is_edge(current[b])) ++b;
    while (e > b && is_edge(current[e - 1])) --e;
    if (e > b) words.push_back(internal::ToLower(std::string_view(current).substr(b, e - b)));
    current.clear();
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      current.push_back(c);
    }
  }
  flush();
  return words;
}

}  // namespace

SatisfactionBucket BucketFor(int satisfaction) {
  if (satisfaction <= 2) return SatisfactionBucket::kLow;
  if (satisfaction == 3) return SatisfactionBucket::kMid;
  return SatisfactionBucket::kHigh;
}

Polarity PolarityOf(std::string_view pattern) {
  static const std::set<std::string> kNegative{"not", "don't", "dont", "hate", "dislike", "no"};
  static const std::set<std::string> kPositive{"like", "love", "want"};
  auto words = PolarityWords(pattern);
  for (const auto& w : words)
    if (kNegative.contains(w)) return Polarity::kNegative;
  for (const auto& w : words)
    if (kPositive.contains(w)) return Polarity::kPositive;
  return Polarity::kNeutral;
}

std::vector<std::string> Placeholders(std::string_view pattern) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < pattern.size()) {
    std::size_t open = pattern.find_first_of("{}", pos);
    if (open == std::string_view::npos) break;
    if (pattern[open] == '}')
      throw Error(ErrorCode::kMalformedDocument,
                  "unbalanced '}' in template '" + std::string(pattern) + "'");
    std::size_t close = pattern.find_first_of("{}", open + 1);
    if (close == std::string_view::npos || pattern[close] == '{' || close == open + 1)
      throw Error(ErrorCode::kMalformedDocument,
                  "malformed placeholder in template '" + std::string(pattern) + "'");
    out.emplace_back(pattern.substr(open + 1, close - open - 1));
    pos = close + 1;
  }
  return out;
}

Template MakeTemplate(Intent intent, std::string pattern, Polarity polarity,
                      SatisfactionBucket bucket, bool is_default) {
  Template t;
  auto names = Placeholders(pattern);
  t.slots = std::set<std::string>(names.begin(), names.end());
  t.length = static_cast<int>(nlu::Tokenize(pattern).size());
  t.intent = std::move(intent);
  t.pattern = std::move(pattern);
  t.polarity = polarity;
  t.bucket = bucket;
  t.is_default = is_default;
  return t;
}

std::map<std::string, std::string> BuiltinDefaultPatterns() {
  return {
      {"GREETING", "Hello."},
      {"DISCLOSE", "I am looking for {slot}."},
      {"REVISE", "Actually, I would prefer {slot}."},
      {"INQUIRE", "Can you tell me more about it?"},
      {"ACCEPT", "Sounds good, I will watch it."},
      {"REJECT", "I have already seen that one."},
      {"DONE", "Goodbye."},
  };
}

bool TemplateStore::Add(Template t) {
  auto& list = templates_[t.intent];
  for (const auto& existing : list) {
    if (existing.pattern == t.pattern && existing.polarity == t.polarity &&
        existing.bucket == t.bucket && existing.length == t.length)
      return false;
  }
  list.push_back(std::move(t));
  return true;
}

const std::vector<Template>& TemplateStore::For(const Intent& intent) const {
  static const std::vector<Template> kNone;
  auto it = templates_.find(intent);
  return it == templates_.end() ? kNone : it->second;
}

bool TemplateStore::Covers(const Intent& intent) const {
  return !For(intent).empty() || defaults_.contains(intent);
}

std::vector<Intent> TemplateStore::Intents() const {
  std::vector<Intent> out;
  for (const auto& [intent, list] : templates_)
    if (!list.empty()) out.push_back(intent);
  return out;
}

std::size_t TemplateStore::size() const {
  std::size_t n = 0;
  for (const auto& [_, list] : templates_) n += list.size();
  return n;
}

void TemplateStore::SetDefaultPattern(const Intent& intent, std::string pattern) {
  defaults_[intent] = std::move(pattern);
}

Template TemplateStore::DefaultTemplate(const Intent& intent,
                                        const std::set<std::string>& slots) const {
  std::string pattern;
  if (auto it = defaults_.find(intent); it != defaults_.end()) {
    pattern = it->second;
  } else {
    pattern = slots.empty() ? "OK." : "{slot}.";
  }
  std::string voiced;
  for (const auto& s : slots) {
    if (!voiced.empty()) voiced += " and ";
    voiced += "{" + s + "}";
  }
  if (voiced.empty()) voiced = "something";
  const std::string marker = "{slot}";
  for (auto pos = pattern.find(marker); pos != std::string::npos;
       pos = pattern.find(marker, pos + voiced.size()))
    pattern.replace(pos, marker.size(), voiced);
  if (!slots.empty() && Placeholders(pattern).empty()) pattern += " " + voiced;
  return MakeTemplate(intent, std::move(pattern), Polarity::kNeutral,
                      SatisfactionBucket::kAny, /*is_default=*/true);
}

void TemplateStore::ValidateSlots(const Domain& domain) const {
  for (const auto& [intent, list] : templates_)
    for (const auto& t : list)
      for (const auto& s : t.slots)
        if (!domain.HasSlot(s))
          throw Error(ErrorCode::kUnknownSlot,
                      "template '" + t.pattern + "' uses undeclared slot '" + s + "'");
}

json TemplateStore::ToJson() const {
  json templates = json::array();
  for (const auto& [intent, list] : templates_) {
    for (const auto& t : list) {
      templates.push_back({{"intent", t.intent.label()},
                           {"pattern", t.pattern},
                           {"polarity", ToString(t.polarity)},
                           {"bucket", ToString(t.bucket)},
                           {"length", t.length},
                           {"default", t.is_default}});
    }
  }
  json defaults = json::object();
  for (const auto& [intent, pattern] : defaults_) defaults[intent.label()] = pattern;
  return {{"templates", templates}, {"default_patterns", defaults}};
}

TemplateStore TemplateStore::FromJson(const json& j) {
  TemplateStore store;
  try {
    for (const auto& t : j.at("templates")) {
      store.Add(MakeTemplate(Intent(t.at("intent").get<std::string>()),
                             t.at("pattern").get<std::string>(),
                             ParsePolarity(t.at("polarity").get<std::string>()),
                             ParseBucket(t.at("bucket").get<std::string>()),
                             t.value("default", false)));
    }
    for (const auto& [intent, pattern] : j.at("default_patterns").items())
      store.SetDefaultPattern(Intent(intent), pattern.get<std::string>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, e.what());
  }
  return store;
}

namespace {

bool IsWordChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || static_cast<unsigned char>(c) >= 0x80;
}

// First occurrence of `value` in `text` outside the claimed spans,
// preferring whole-word matches.
std::optional<std::size_t> FindSpan(const std::string& text, const std::string& value,
                                    const std::vector<std::pair<std::size_t, std::size_t>>& claimed) {
  if (value.empty()) return std::nullopt;
  auto free = [&](std::size_t b) {
    std::size_t e = b + value.size();
    for (const auto& [cb, ce] : claimed)
      if (b < ce && cb < e) return false;
    return true;
  };
  std::optional<std::size_t> any;
  for (auto pos = text.find(value); pos != std::string::npos; pos = text.find(value, pos + 1)) {
    if (!free(pos)) continue;
    bool left = pos == 0 || !IsWordChar(text[pos - 1]) || !IsWordChar(value.front());
    std::size_t end = pos + value.size();
    bool right = end == text.size() || !IsWordChar(text[end]) || !IsWordChar(value.back());
    if (left && right) return pos;
    if (!any) any = pos;
  }
  return any;
}

}  // namespace

TemplateStore ExtractTemplates(const std::vector<Dialogue>& sample,
                               const std::vector<Intent>& cover,
                               const std::map<std::string, std::string>& default_patterns) {
  TemplateStore store;
  for (const auto& [intent, pattern] : default_patterns)
    store.SetDefaultPattern(Intent(intent), pattern);

  for (const auto& d : sample) {
    for (const auto& u : d.utterances) {
      if (u.participant != Participant::kUser || !u.intent) continue;
      // Only the first value of each slot becomes a placeholder, so that
      // instantiating with one value per slot reproduces the text.
      std::vector<std::pair<std::size_t, std::size_t>> claimed;
      std::vector<std::pair<std::size_t, std::string>> spans;  // begin, slot
      std::set<std::string> seen_slots;
      for (const auto& sv : u.slot_values) {
        if (!seen_slots.insert(sv.slot).second) continue;
        auto pos = FindSpan(u.text, sv.value, claimed);
        if (!pos) continue;
        claimed.emplace_back(*pos, *pos + sv.value.size());
        spans.emplace_back(*pos, sv.slot);
      }
      std::vector<std::size_t> order(spans.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return claimed[a].first < claimed[b].first; });
      std::string pattern;
      std::size_t cursor = 0;
      for (std::size_t i : order) {
        pattern += u.text.substr(cursor, claimed[i].first - cursor);
        pattern += "{" + spans[i].second + "}";
        cursor = claimed[i].second;
      }
      pattern += u.text.substr(cursor);

      auto bucket = u.satisfaction ? BucketFor(*u.satisfaction) : SatisfactionBucket::kAny;
      Polarity polarity = PolarityOf(pattern);
      store.Add(MakeTemplate(*u.intent, std::move(pattern), polarity, bucket));
    }
  }

  for (const auto& intent : cover)
    if (store.For(intent).empty()) store.Add(store.DefaultTemplate(intent, {}));
  return store;
}

Selection SelectTemplate(const TemplateStore& store, const Intent& intent,
                         const std::set<std::string>& needed_slots,
                         std::optional<Polarity> polarity,
                         const user::ContextState& context, Rng& rng) {
  const auto& all = store.For(intent);
  const SatisfactionBucket want_bucket = BucketFor(context.satisfaction);
  const bool prefer_short =
      context.time_of_day == user::TimeOfDay::kNight || context.setting == user::Setting::kGroup;

  auto covers = [&](const Template& t) {
    return std::includes(t.slots.begin(), t.slots.end(), needed_slots.begin(),
                         needed_slots.end());
  };

  for (int stage = 1; stage <= 4; ++stage) {
    const bool use_length = stage == 1 && prefer_short;
    const bool use_bucket = stage <= 2;
    const bool use_polarity = stage <= 3 && polarity.has_value();

    std::vector<const Template*> pool;
    for (const auto& t : all) {
      if (!covers(t)) continue;
      if (use_polarity && t.polarity != *polarity) continue;
      if (use_bucket && t.bucket != want_bucket && t.bucket != SatisfactionBucket::kAny)
        continue;
      pool.push_back(&t);
    }
    if (use_bucket && std::any_of(pool.begin(), pool.end(),
                                  [&](const Template* t) { return t->bucket == want_bucket; })) {
      std::erase_if(pool, [&](const Template* t) { return t->bucket != want_bucket; });
    }
    if (use_length && !pool.empty()) {
      std::vector<int> lengths;
      for (const auto* t : pool) lengths.push_back(t->length);
      std::sort(lengths.begin(), lengths.end());
      std::size_t n = lengths.size();
      double median = n % 2 ? lengths[n / 2] : (lengths[n / 2 - 1] + lengths[n / 2]) / 2.0;
      std::erase_if(pool, [&](const Template* t) { return t->length > median; });
    }
    if (pool.empty()) continue;
    std::size_t pick = pool.size() == 1 ? 0 : rng.Index(pool.size());
    return {*pool[pick], stage};
  }
  return {store.DefaultTemplate(intent, needed_slots), 5};
}

std::string Instantiate(const Template& t,
                        const std::map<std::string, std::string>& slot_values) {
  std::string out;
  std::size_t pos = 0;
  while (pos < t.pattern.size()) {
    std::size_t open = t.pattern.find('{', pos);
    if (open == std::string::npos) break;
    std::size_t close = t.pattern.find('}', open);
    out += t.pattern.substr(pos, open - pos);
    std::string slot = t.pattern.substr(open + 1, close - open - 1);
    auto it = slot_values.find(slot);
    if (it == slot_values.end())
      throw Error(ErrorCode::kMissingSlotValue,
                  "no value for {" + slot + "} in '" + t.pattern + "'");
    out += it->second;
    pos = close + 1;
  }
  out += t.pattern.substr(pos);
  return out;
}

}  // namespace usersim::nlg
