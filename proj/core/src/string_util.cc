#include "string_util.h"

#include <fstream>
#include <sstream>

#include "usersim/error.h"

namespace usersim::internal {

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace usersim::internal
