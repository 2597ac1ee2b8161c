#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tdec {

// Exit-code categories used by the command-line front end.
enum class ErrorKind { Io = 1, Format = 2, Data = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

// Malformed input text (CSV/JSON structure, unparsable cells, bad flag syntax).
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(ErrorKind::Format, what) {}
  FormatError(const std::string& what, std::size_t row, std::size_t column)
      : Error(ErrorKind::Format, what + " (row " + std::to_string(row) + ", column " +
                                     std::to_string(column) + ")"),
        row_(row),
        column_(column) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_ = 0;
  std::size_t column_ = 0;
};

// Well-formed input whose values violate a precondition.
class ValueError : public Error {
 public:
  explicit ValueError(const std::string& what) : Error(ErrorKind::Format, what) {}
};

// Data that is well-formed but cannot be processed (degenerate, misaligned, ...).
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

class InsufficientLengthError : public DataError {
 public:
  InsufficientLengthError(std::size_t length, std::size_t required)
      : DataError("segment of " + std::to_string(length) + " samples is too short; at least " +
                  std::to_string(required) + " required"),
        length_(length),
        required_(required) {}
  std::size_t length() const noexcept { return length_; }
  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t length_;
  std::size_t required_;
};

class DegenerateChannelError : public DataError {
 public:
  DegenerateChannelError(std::string channel, std::size_t lag_samples)
      : DataError("embedded column for channel '" + channel + "' at lag " +
                  std::to_string(lag_samples) + " has zero variance"),
        channel_(std::move(channel)),
        lag_(lag_samples) {}
  const std::string& channel() const noexcept { return channel_; }
  std::size_t lag_samples() const noexcept { return lag_; }

 private:
  std::string channel_;
  std::size_t lag_;
};

class DegenerateFeatureError : public DataError {
 public:
  explicit DegenerateFeatureError(std::size_t feature)
      : DataError("feature f" + std::to_string(feature) + " has zero variance"), feature_(feature) {}
  std::size_t feature() const noexcept { return feature_; }

 private:
  std::size_t feature_;
};

class NumericalError : public DataError {
 public:
  explicit NumericalError(const std::string& what) : DataError(what) {}
};

class FoldError : public DataError {
 public:
  explicit FoldError(std::string subject)
      : DataError("training split without subject '" + subject + "' contains a single class"),
        subject_(std::move(subject)) {}
  const std::string& subject() const noexcept { return subject_; }

 private:
  std::string subject_;
};

class AlignmentError : public DataError {
 public:
  explicit AlignmentError(std::vector<std::string> missing)
      : DataError(describe(missing)), missing_(std::move(missing)) {}
  const std::vector<std::string>& missing_keys() const noexcept { return missing_; }

 private:
  static std::string describe(const std::vector<std::string>& keys) {
    std::string out = "modalities are not aligned; unmatched keys:";
    for (const auto& k : keys) out += " " + k;
    return out;
  }
  std::vector<std::string> missing_;
};

}  // namespace tdec
