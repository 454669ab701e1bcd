#pragma once

#include <stdexcept>
#include <string>

namespace blochlab {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& m) : std::runtime_error(m) {}
};

struct NotPrimePower : std::runtime_error {
  explicit NotPrimePower(const std::string& m) : std::runtime_error(m) {}
};

struct TooLarge : std::runtime_error {
  explicit TooLarge(const std::string& m) : std::runtime_error(m) {}
};

struct NotAHom : std::runtime_error {
  explicit NotAHom(const std::string& m) : std::runtime_error(m) {}
};

struct IllDefined : std::runtime_error {
  explicit IllDefined(const std::string& m) : std::runtime_error(m) {}
};

struct NotAClique : std::runtime_error {
  explicit NotAClique(const std::string& m) : std::runtime_error(m) {}
};

struct NotStable : std::runtime_error {
  explicit NotStable(const std::string& m) : std::runtime_error(m) {}
};

struct GenerationIncomplete : std::runtime_error {
  explicit GenerationIncomplete(const std::string& m) : std::runtime_error(m) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& m) : std::runtime_error(m) {}
};

} // namespace blochlab
