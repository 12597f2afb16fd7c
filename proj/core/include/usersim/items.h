#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "usersim/domain.h"

namespace usersim {

struct Item {
  std::string item_id;
  std::string name;
  // slot -> values, in file order.
  std::map<std::string, std::vector<std::string>> attributes;

  const std::vector<std::string>& Values(std::string_view slot) const;
  bool HasValue(std::string_view slot, std::string_view value) const;

  friend bool operator==(const Item&, const Item&) = default;
};

// Items keyed by id, iterable in the order they were loaded.
class ItemCollection {
 public:
  // Throws Error(kDuplicateItem).
  void Add(Item item);

  const Item* Find(std::string_view item_id) const;
  // Exact (case-insensitive) title lookup.
  const Item* FindByName(std::string_view name) const;

  const std::vector<Item>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  // Distinct values of `slot` across the collection, in first-seen order.
  std::vector<std::string> DistinctValues(std::string_view slot) const;

 private:
  std::vector<Item> items_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Reads rows of the form
//
//   i1 | The Matrix | genre=action,sci-fi; keyword=hacker
//
// Blank lines and lines starting with '#' are skipped.
ItemCollection LoadItemCollection(std::istream& in, const Domain& domain);
ItemCollection LoadItemCollection(const std::filesystem::path& path,
                                  const Domain& domain);

}  // namespace usersim
