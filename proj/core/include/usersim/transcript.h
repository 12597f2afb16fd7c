#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "usersim/dialogue.h"

namespace usersim {

inline constexpr int kTranscriptSchemaVersion = 1;

nlohmann::json DialogueToJson(const Dialogue& dialogue);
Dialogue DialogueFromJson(const nlohmann::json& j);

// {"schema_version": 1, "dialogues": [...]}
void ExportDialogues(std::span<const Dialogue> dialogues, std::ostream& out);
std::string ExportDialogues(std::span<const Dialogue> dialogues);
void ExportDialogues(std::span<const Dialogue> dialogues,
                     const std::filesystem::path& path);

std::vector<Dialogue> ImportDialogues(std::istream& in);
std::vector<Dialogue> ImportDialoguesFromString(const std::string& text);
std::vector<Dialogue> ImportDialogues(const std::filesystem::path& path);

}  // namespace usersim
