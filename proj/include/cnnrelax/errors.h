#ifndef CNNRELAX_ERRORS_H_
#define CNNRELAX_ERRORS_H_

#include <stdexcept>
#include <string>

namespace cnnrelax {

// A file could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input. line() is 1-based, 0 when not tied to a line.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace cnnrelax

#endif  // CNNRELAX_ERRORS_H_
