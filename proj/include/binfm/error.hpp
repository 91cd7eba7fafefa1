#pragma once

#include <stdexcept>
#include <string>

namespace binfm {

enum class ErrorKind {
  usage,       // invalid argument or configuration
  data,        // malformed or inconsistent input data
  divergence,  // non-finite loss during training
  io,          // file could not be opened, read or written
  format,      // model file failed validation
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace binfm
