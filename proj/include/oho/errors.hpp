#ifndef OHO_ERRORS_HPP
#define OHO_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace oho {

// Shape or layout disagreement between operands.
class DimensionError : public std::runtime_error {
 public:
  explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid run configuration. `field` names the offending config entry when known.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg, std::string field = "")
      : std::runtime_error(field.empty() ? msg : field + ": " + msg), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Malformed data file. Carries the byte offset where parsing failed.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::uint64_t offset)
      : std::runtime_error(msg + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

// Non-finite value produced by a numerical routine. For influence updates,
// `step` and `column` identify where the instability appeared.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg, std::int64_t step = -1, std::int64_t column = -1)
      : std::runtime_error(msg), step_(step), column_(column) {}
  std::int64_t step() const { return step_; }
  std::int64_t column() const { return column_; }

 private:
  std::int64_t step_;
  std::int64_t column_;
};

// Filesystem failure (open/read/write).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace oho

#endif  // OHO_ERRORS_HPP
