#pragma once

#include <stdexcept>
#include <string>

namespace maglap {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Total flux \int_0^{r0} s B(s) ds diverges.
class InfiniteFluxError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Field profile violates B >= 0 or is otherwise malformed.
class InvalidFieldError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix entry came out non-finite.
class DiscretizationError : public std::runtime_error {
public:
  DiscretizationError(const std::string &what, std::size_t index)
      : std::runtime_error(what + " (grid index " + std::to_string(index) + ")"),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

private:
  std::size_t index_;
};

class PreconditionError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace maglap
