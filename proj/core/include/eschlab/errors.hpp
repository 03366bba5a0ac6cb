#pragma once

#include <stdexcept>
#include <string>

namespace esch {

// Base class for all library errors.  Rejections of mathematically invalid
// input (non-admissible pairs, coprimality failures, domain violations)
// derive from DomainRejection so callers can map them to a single exit code.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DomainRejection : public Error {
 public:
  using Error::Error;
};

class NotAdmissible : public DomainRejection {
 public:
  using DomainRejection::DomainRejection;
};

class NotPairwiseCoprime : public DomainRejection {
 public:
  using DomainRejection::DomainRejection;
};

class NotCandidate : public DomainRejection {
 public:
  using DomainRejection::DomainRejection;
};

class PreconditionFailed : public DomainRejection {
 public:
  using DomainRejection::DomainRejection;
};

// Named so the message can report which domain flag was violated.
class DomainError : public DomainRejection {
 public:
  using DomainRejection::DomainRejection;
};

class Overflow : public Error {
 public:
  using Error::Error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class DegeneratePlane : public Error {
 public:
  using Error::Error;
};

class ZeroZ : public Error {
 public:
  using Error::Error;
};

class EmptyWindow : public Error {
 public:
  using Error::Error;
};

class NoGammaSolution : public Error {
 public:
  using Error::Error;
};

class WitnessSearchFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace esch
