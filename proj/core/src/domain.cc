#include "usersim/domain.h"

#include <set>

#include "string_util.h"
#include "usersim/error.h"

namespace usersim {

using internal::Split;
using internal::ToLower;
using internal::Trim;

Domain::Domain(std::string name, std::vector<std::string> slots)
    : name_(std::move(name)), slots_(std::move(slots)) {
  if (slots_.empty())
    throw Error(ErrorCode::kEmptySlotList,
                "domain '" + name_ + "' declares no slots");
  std::set<std::string> seen;
  for (const auto& slot : slots_) {
    if (slot.empty())
      throw Error(ErrorCode::kMalformedDocument, "empty slot name");
    if (!seen.insert(ToLower(slot)).second)
      throw Error(ErrorCode::kDuplicateSlot,
                  "slot '" + slot + "' declared twice (case-insensitive)");
  }
}

bool Domain::HasSlot(std::string_view slot) const {
  return SlotRank(slot).has_value();
}

std::optional<std::size_t> Domain::SlotRank(std::string_view slot) const {
  for (std::size_t i = 0; i < slots_.size(); ++i)
    if (slots_[i] == slot) return i;
  return std::nullopt;
}

Domain ParseDomainConfig(std::string_view text) {
  std::optional<std::string> name;
  std::optional<std::vector<std::string>> slots;
  int slots_line = 0;

  int line_no = 0;
  for (std::string_view raw : Split(text, '\n')) {
    ++line_no;
    if (internal::IsCommentOrBlank(raw)) continue;
    auto where = "line " + std::to_string(line_no) + ": ";
    auto eq = raw.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::kMalformedDocument,
                  where + "expected 'key = value', got '" +
                      std::string(Trim(raw)) + "'");
    std::string key = ToLower(Trim(raw.substr(0, eq)));
    std::string_view value = Trim(raw.substr(eq + 1));
    if (key == "name") {
      if (name) throw Error(ErrorCode::kMalformedDocument, where + "duplicate key 'name'");
      name = std::string(value);
    } else if (key == "slots") {
      if (slots) throw Error(ErrorCode::kMalformedDocument, where + "duplicate key 'slots'");
      slots.emplace();
      slots_line = line_no;
      if (!value.empty()) {
        for (std::string_view s : Split(value, ',')) {
          s = Trim(s);
          if (s.empty())
            throw Error(ErrorCode::kMalformedDocument, where + "empty slot name");
          slots->emplace_back(s);
        }
      }
    } else {
      throw Error(ErrorCode::kMalformedDocument,
                  where + "unknown key '" + key + "'");
    }
  }
  if (!name || name->empty())
    throw Error(ErrorCode::kMalformedDocument, "missing key 'name'");
  if (!slots || slots->empty())
    throw Error(ErrorCode::kEmptySlotList,
                slots ? "line " + std::to_string(slots_line) + ": no slots declared"
                      : std::string("missing key 'slots'"));
  try {
    return Domain(*name, *slots);
  } catch (const Error& e) {
    throw Error(e.code(), "line " + std::to_string(slots_line) + ": " + e.what());
  }
}

Domain LoadDomainConfig(const std::filesystem::path& path) {
  return ParseDomainConfig(internal::ReadFile(path.string()));
}

}  // namespace usersim
