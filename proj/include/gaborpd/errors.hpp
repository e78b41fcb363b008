#pragma once

#include <stdexcept>
#include <string>

namespace gaborpd {

/// Invalid or non-finite argument outside an operation's domain.
class DomainError : public std::domain_error {
public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Image or kernel dimensions incompatible with the requested operation.
class SizeError : public std::length_error {
public:
  explicit SizeError(const std::string& what) : std::length_error(what) {}
};

/// Discretization produced fewer than three taps.
class DegenerateKernelError : public std::runtime_error {
public:
  explicit DegenerateKernelError(const std::string& what) : std::runtime_error(what) {}
};

/// Parameter fitting could not bracket an interior minimum.
class FitError : public std::runtime_error {
public:
  explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed file or config contents.
class FormatError : public std::runtime_error {
public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gaborpd
