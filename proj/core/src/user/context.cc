#include "usersim/user/context.h"

#include <algorithm>
#include <cmath>

#include "usersim/error.h"

namespace usersim::user {

void Persona::Validate() const {
  if (patience < 1)
    throw Error(ErrorCode::kInvalidConfig, "patience must be a positive integer");
  if (!(cooperativeness >= 0.0 && cooperativeness <= 1.0))
    throw Error(ErrorCode::kInvalidConfig, "cooperativeness must lie in [0,1]");
}

std::string_view ToString(TimeOfDay v) {
  switch (v) {
    case TimeOfDay::kMorning: return "morning";
    case TimeOfDay::kAfternoon: return "afternoon";
    case TimeOfDay::kEvening: return "evening";
    case TimeOfDay::kNight: return "night";
  }
  return "";
}

std::string_view ToString(DayType v) {
  return v == DayType::kWeekday ? "weekday" : "weekend";
}

std::string_view ToString(Setting v) {
  return v == Setting::kAlone ? "alone" : "group";
}

std::optional<TimeOfDay> ParseTimeOfDay(std::string_view s) {
  for (auto v : {TimeOfDay::kMorning, TimeOfDay::kAfternoon, TimeOfDay::kEvening,
                 TimeOfDay::kNight})
    if (ToString(v) == s) return v;
  return std::nullopt;
}

std::optional<DayType> ParseDayType(std::string_view s) {
  for (auto v : {DayType::kWeekday, DayType::kWeekend})
    if (ToString(v) == s) return v;
  return std::nullopt;
}

std::optional<Setting> ParseSetting(std::string_view s) {
  for (auto v : {Setting::kAlone, Setting::kGroup})
    if (ToString(v) == s) return v;
  return std::nullopt;
}

std::string ContextState::Describe() const {
  return std::string(ToString(time_of_day)) + "/" + std::string(ToString(day_type)) +
         "/" + std::string(ToString(setting)) + "/" + std::to_string(satisfaction);
}

std::string_view ToString(SatisfactionEvent e) {
  switch (e) {
    case SatisfactionEvent::kExpectedResponse: return "EXPECTED_RESPONSE";
    case SatisfactionEvent::kUnexpectedResponse: return "UNEXPECTED_RESPONSE";
    case SatisfactionEvent::kGoodRecommendation: return "GOOD_RECOMMENDATION";
    case SatisfactionEvent::kBadRecommendation: return "BAD_RECOMMENDATION";
  }
  return "";
}

ContextState UpdateSatisfaction(ContextState context, SatisfactionEvent event) {
  int delta = 0;
  switch (event) {
    case SatisfactionEvent::kUnexpectedResponse:
    case SatisfactionEvent::kBadRecommendation:
      delta = -1;
      break;
    case SatisfactionEvent::kGoodRecommendation:
      delta = 1;
      break;
    case SatisfactionEvent::kExpectedResponse:
      break;
  }
  context.satisfaction = std::clamp(context.satisfaction + delta, 1, 5);
  return context;
}

}  // namespace usersim::user
