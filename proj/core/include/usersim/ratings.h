#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace usersim {

struct RatingScale {
  double min = 1.0;
  double max = 5.0;

  bool Contains(double r) const { return r >= min && r <= max; }
  // Throws Error(kInvalidScale) unless min < max.
  void Validate() const;
};

struct Rating {
  std::string user_id;
  std::string item_id;
  double rating = 0.0;

  friend bool operator==(const Rating&, const Rating&) = default;
};

// CSV `user_id,item_id,rating`. An initial header row is accepted; lines
// starting with '#' are comments.
std::vector<Rating> LoadRatings(std::istream& in, const RatingScale& scale);
std::vector<Rating> LoadRatings(const std::filesystem::path& path,
                                const RatingScale& scale);

}  // namespace usersim
