#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace usersim {

// The slot schema of an application. Slot order is significant: it is the
// priority order used to break slot collisions during lexicon training.
class Domain {
 public:
  // Throws Error(kEmptySlotList) or Error(kDuplicateSlot).
  Domain(std::string name, std::vector<std::string> slots);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& slots() const { return slots_; }

  bool HasSlot(std::string_view slot) const;
  // Declaration index of `slot`, or nullopt when undeclared.
  std::optional<std::size_t> SlotRank(std::string_view slot) const;

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  std::string name_;
  std::vector<std::string> slots_;
};

// Parses the flat key-value domain config:
//
//   # comment
//   name = movies
//   slots = title, genre, keyword
//
// Errors carry the offending line number.
Domain ParseDomainConfig(std::string_view text);
Domain LoadDomainConfig(const std::filesystem::path& path);

}  // namespace usersim
