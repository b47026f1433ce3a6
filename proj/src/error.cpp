#include "isgspot/error.hpp"

namespace isgspot {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kSchema: return "schema error";
    case ErrorKind::kEmptyRelation: return "empty relation";
    case ErrorKind::kIo: return "i/o error";
    case ErrorKind::kIndex: return "index error";
    case ErrorKind::kModel: return "model error";
    case ErrorKind::kLookup: return "lookup error";
    case ErrorKind::kContract: return "contract violation";
    case ErrorKind::kSpec: return "spec error";
    case ErrorKind::kUndefinedAuc: return "undefined AUC";
    case ErrorKind::kConsistency: return "consistency error";
    case ErrorKind::kOracleRefusal: return "oracle refusal";
  }
  return "error";
}

int Error::exit_status() const noexcept {
  switch (kind_) {
    case ErrorKind::kParse:
    case ErrorKind::kSchema:
    case ErrorKind::kEmptyRelation:
    case ErrorKind::kIo:
      return 2;
    default:
      return 1;
  }
}

void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace isgspot
