#pragma once

#include <stdexcept>
#include <string>

namespace tagsim {

/// Base class for all toolkit errors. The CLI maps ConfigError to exit
/// code 2 and every other Error to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration (bad flag value, inconsistent generator setup).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input file structure is invalid at the container level (bad CSV header,
/// corrupt gzip). Distinct from per-line skips, which are only counted.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// No valid entries survived parsing and filtering.
class EmptyStreamError : public Error {
 public:
  using Error::Error;
};

/// The generator cannot place the requested number of distinct tags in one
/// window (vocabulary smaller than the window and innovation disabled).
class WindowUnsatisfiableError : public Error {
 public:
  using Error::Error;
};

/// Every bin fell below the minimum entry count.
class NoRetainedBinsError : public Error {
 public:
  using Error::Error;
};

/// All window sizes are 1, so log binning has no range.
class DegenerateRangeError : public Error {
 public:
  using Error::Error;
};

/// Too few points for a fit.
class InsufficientPointsError : public Error {
 public:
  using Error::Error;
};

/// Optimal conditional entropy is zero; the describer/categorizer ratio is
/// undefined for this user.
class ZeroHOptError : public Error {
 public:
  using Error::Error;
};

/// A user profile with no tags at all.
class EmptyProfileError : public Error {
 public:
  using Error::Error;
};

/// No user passed the effective-user filter.
class NoEffectiveUsersError : public Error {
 public:
  using Error::Error;
};

/// User does not meet the effective-user requirements for motivation
/// scoring. Carries which requirement failed.
class NotEffectiveUserError : public Error {
 public:
  enum class Reason { too_few_entries, zero_h_opt };

  NotEffectiveUserError(Reason reason, const std::string& what)
      : Error(what), reason_(reason) {}

  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

/// Filesystem-level failure (missing or unreadable file).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tagsim
