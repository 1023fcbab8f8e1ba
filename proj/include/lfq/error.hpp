#pragma once

#include <stdexcept>
#include <string>

namespace lfq {

/// Bad caller input: non-prime characteristic, wrong degree, malformed flags.
class InputError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// An internal invariant failed (non-integral class number, non-positive L(1),
/// ambiguous root magnitude). Always signals a bug or a precision problem.
class ArithmeticError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// The numeric method could not reach its target (bracket failure, series cap).
class ConvergenceError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Cache files that fail validation. Callers discard and rebuild.
class CacheError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace lfq
