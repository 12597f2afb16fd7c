#include "usersim/ratings.h"

#include <charconv>
#include <cmath>
#include <fstream>

#include "string_util.h"
#include "usersim/error.h"

namespace usersim {

using internal::Split;
using internal::ToLower;
using internal::Trim;

void RatingScale::Validate() const {
  if (!(min < max) || !std::isfinite(min) || !std::isfinite(max))
    throw Error(ErrorCode::kInvalidScale,
                "rating scale requires min < max, got [" + std::to_string(min) +
                    ", " + std::to_string(max) + "]");
}

std::vector<Rating> LoadRatings(std::istream& in, const RatingScale& scale) {
  scale.Validate();
  std::vector<Rating> ratings;
  std::string line;
  int line_no = 0;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (internal::IsCommentOrBlank(line)) continue;
    auto where = "line " + std::to_string(line_no) + ": ";
    auto fields = Split(line, ',');
    if (fields.size() != 3)
      throw Error(ErrorCode::kWrongArity,
                  where + "expected 3 fields, got " + std::to_string(fields.size()));
    std::string_view user = Trim(fields[0]);
    std::string_view item = Trim(fields[1]);
    std::string_view value = Trim(fields[2]);
    if (first_row) {
      first_row = false;
      if (ToLower(user) == "user_id" && ToLower(item) == "item_id") continue;
    }
    double r = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), r);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(r))
      throw Error(ErrorCode::kNonNumericRating,
                  where + "rating '" + std::string(value) + "' is not a number");
    if (!scale.Contains(r))
      throw Error(ErrorCode::kRatingOutOfScale,
                  where + "rating " + std::string(value) + " outside scale");
    if (user.empty() || item.empty())
      throw Error(ErrorCode::kWrongArity, where + "empty user_id or item_id");
    ratings.push_back({std::string(user), std::string(item), r});
  }
  return ratings;
}

std::vector<Rating> LoadRatings(const std::filesystem::path& path,
                                const RatingScale& scale) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return LoadRatings(in, scale);
}

}  // namespace usersim
