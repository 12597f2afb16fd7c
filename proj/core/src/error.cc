#include "usersim/error.h"

namespace usersim {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedDocument: return "MalformedDocument";
    case ErrorCode::kEmptySlotList: return "EmptySlotList";
    case ErrorCode::kDuplicateSlot: return "DuplicateSlot";
    case ErrorCode::kUnknownSlot: return "UnknownSlot";
    case ErrorCode::kDuplicateItem: return "DuplicateItem";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kInvalidScale: return "InvalidScale";
    case ErrorCode::kRatingOutOfScale: return "RatingOutOfScale";
    case ErrorCode::kNonNumericRating: return "NonNumericRating";
    case ErrorCode::kWrongArity: return "WrongArity";
    case ErrorCode::kSchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::kInvalidDialogue: return "InvalidDialogue";
    case ErrorCode::kEmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::kUnknownIntent: return "UnknownIntent";
    case ErrorCode::kNoTerminalIntent: return "NoTerminalIntent";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kInsufficientRatingsUsers: return "InsufficientRatingsUsers";
    case ErrorCode::kMissingSlotValue: return "MissingSlotValue";
    case ErrorCode::kNoDialogues: return "NoDialogues";
    case ErrorCode::kTransportError: return "TransportError";
    case ErrorCode::kProtocolError: return "ProtocolError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace usersim
