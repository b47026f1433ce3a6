#pragma once

#include <stdexcept>
#include <string>

namespace isgspot {

enum class ErrorKind {
  kParse,
  kSchema,
  kEmptyRelation,
  kIo,
  kIndex,
  kModel,
  kLookup,
  kContract,
  kSpec,
  kUndefinedAuc,
  kConsistency,
  kOracleRefusal,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; callers switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Process exit status for the CLI: 2 for input/parse trouble, 1 otherwise.
  int exit_status() const noexcept;

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool cond, const char* what) {
  if (!cond) fail(ErrorKind::kContract, what);
}

}  // namespace isgspot
