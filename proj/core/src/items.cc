#include "usersim/items.h"

#include <fstream>
#include <string>

#include "string_util.h"
#include "usersim/error.h"

namespace usersim {

using internal::Split;
using internal::ToLower;
using internal::Trim;

const std::vector<std::string>& Item::Values(std::string_view slot) const {
  static const std::vector<std::string> kEmpty;
  auto it = attributes.find(std::string(slot));
  return it == attributes.end() ? kEmpty : it->second;
}

bool Item::HasValue(std::string_view slot, std::string_view value) const {
  for (const auto& v : Values(slot))
    if (v == value) return true;
  return false;
}

void ItemCollection::Add(Item item) {
  if (index_.contains(item.item_id))
    throw Error(ErrorCode::kDuplicateItem, "item '" + item.item_id + "' appears twice");
  index_.emplace(item.item_id, items_.size());
  items_.push_back(std::move(item));
}

const Item* ItemCollection::Find(std::string_view item_id) const {
  auto it = index_.find(std::string(item_id));
  return it == index_.end() ? nullptr : &items_[it->second];
}

const Item* ItemCollection::FindByName(std::string_view name) const {
  std::string wanted = ToLower(name);
  for (const auto& item : items_)
    if (ToLower(item.name) == wanted) return &item;
  return nullptr;
}

std::vector<std::string> ItemCollection::DistinctValues(std::string_view slot) const {
  std::vector<std::string> out;
  for (const auto& item : items_)
    for (const auto& v : item.Values(slot))
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  return out;
}

ItemCollection LoadItemCollection(std::istream& in, const Domain& domain) {
  ItemCollection items;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (internal::IsCommentOrBlank(line)) continue;
    auto where = "line " + std::to_string(line_no) + ": ";
    auto columns = Split(line, '|');
    if (columns.size() < 2 || columns.size() > 3)
      throw Error(ErrorCode::kMalformedRow,
                  where + "expected 'item_id | name | attributes'");
    Item item;
    item.item_id = std::string(Trim(columns[0]));
    item.name = std::string(Trim(columns[1]));
    if (item.item_id.empty() || item.name.empty())
      throw Error(ErrorCode::kMalformedRow, where + "empty item_id or name");
    if (columns.size() == 3) {
      for (std::string_view group : Split(columns[2], ';')) {
        group = Trim(group);
        if (group.empty()) continue;
        auto eq = group.find('=');
        if (eq == std::string_view::npos)
          throw Error(ErrorCode::kMalformedRow,
                      where + "attribute group '" + std::string(group) +
                          "' lacks '='");
        std::string slot(Trim(group.substr(0, eq)));
        if (!domain.HasSlot(slot))
          throw Error(ErrorCode::kUnknownSlot,
                      where + "attribute '" + slot + "' is not a slot of domain '" +
                          domain.name() + "'");
        auto& values = item.attributes[slot];
        for (std::string_view v : Split(group.substr(eq + 1), ',')) {
          v = Trim(v);
          if (v.empty())
            throw Error(ErrorCode::kMalformedRow, where + "empty value for '" + slot + "'");
          values.emplace_back(v);
        }
      }
    }
    try {
      items.Add(std::move(item));
    } catch (const Error& e) {
      throw Error(e.code(), where + e.what());
    }
  }
  return items;
}

ItemCollection LoadItemCollection(const std::filesystem::path& path,
                                  const Domain& domain) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return LoadItemCollection(in, domain);
}

}  // namespace usersim
