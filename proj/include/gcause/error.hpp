#ifndef GCAUSE_ERROR_HPP
#define GCAUSE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace gcause {

// All recoverable library failures throw this; the C API layer translates it
// into status codes.
class Error : public std::runtime_error {
 public:
  enum class Kind { invalid_argument, io, parse, numeric };

  Error(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

[[noreturn]] inline void fail(Error::Kind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool cond, Error::Kind kind, const std::string& message) {
  if (!cond) fail(kind, message);
}

}  // namespace gcause

#endif  // GCAUSE_ERROR_HPP
