#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace usersim::user {

// Stable traits of a simulated user.
struct Persona {
  // Consecutive unexpected agent responses tolerated before quitting.
  int patience = 3;
  // Probability of repeating the previous action (rather than switching to
  // a sampled one) after an unexpected agent response.
  double cooperativeness = 0.5;

  // Throws Error(kInvalidConfig) on out-of-range traits.
  void Validate() const;

  friend bool operator==(const Persona&, const Persona&) = default;
};

enum class TimeOfDay { kMorning, kAfternoon, kEvening, kNight };
enum class DayType { kWeekday, kWeekend };
enum class Setting { kAlone, kGroup };

std::string_view ToString(TimeOfDay v);
std::string_view ToString(DayType v);
std::string_view ToString(Setting v);
std::optional<TimeOfDay> ParseTimeOfDay(std::string_view s);
std::optional<DayType> ParseDayType(std::string_view s);
std::optional<Setting> ParseSetting(std::string_view s);

struct ContextState {
  TimeOfDay time_of_day = TimeOfDay::kAfternoon;
  DayType day_type = DayType::kWeekday;
  Setting setting = Setting::kAlone;
  int satisfaction = 3;  // clamped to [1,5]

  // "evening/weekend/alone/3"
  std::string Describe() const;

  friend bool operator==(const ContextState&, const ContextState&) = default;
};

enum class SatisfactionEvent {
  kExpectedResponse,
  kUnexpectedResponse,
  kGoodRecommendation,
  kBadRecommendation,
};

std::string_view ToString(SatisfactionEvent e);

// Unexpected responses and bad recommendations cost one point, good
// recommendations earn one; the result stays within [1,5].
ContextState UpdateSatisfaction(ContextState context, SatisfactionEvent event);

}  // namespace usersim::user
