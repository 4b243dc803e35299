#ifndef OGP_ERRORS_HPP
#define OGP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ogp {

/// Raised when a caller passes an argument outside the documented range.
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when the inputs are well formed but the requested quantity is undefined
/// (for example nq <= 1, or an unreachable target vertex).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Raised when a combinatorial object violates its structural invariants
/// (a parent map with a cycle, an empty support, an invalid kernel).
class StructuralError : public std::logic_error {
public:
    explicit StructuralError(const std::string& what) : std::logic_error(what) {}
};

/// Raised by brute-force routines when the instance is too large to enumerate.
class TooLargeError : public std::length_error {
public:
    explicit TooLargeError(const std::string& what) : std::length_error(what) {}
};

}  // namespace ogp

#endif
