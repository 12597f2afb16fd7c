#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace usersim::nlu {

// Lowercases ASCII letters and splits on every run of characters that are
// not ASCII alphanumerics. Bytes >= 0x80 are kept inside tokens so UTF-8
// words are not torn apart. Empty tokens are dropped.
std::vector<std::string> Tokenize(std::string_view text);

}  // namespace usersim::nlu
