#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace usersim {

enum class ErrorCode {
  kMalformedDocument,
  kEmptySlotList,
  kDuplicateSlot,
  kUnknownSlot,
  kDuplicateItem,
  kMalformedRow,
  kInvalidScale,
  kRatingOutOfScale,
  kNonNumericRating,
  kWrongArity,
  kSchemaVersionMismatch,
  kInvalidDialogue,
  kEmptyTrainingSet,
  kUnknownIntent,
  kNoTerminalIntent,
  kInvalidConfig,
  kInsufficientRatingsUsers,
  kMissingSlotValue,
  kNoDialogues,
  kTransportError,
  kProtocolError,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All recoverable failures in the library surface as this exception. The
// code is stable and is what callers (and tests) should branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace usersim
