#pragma once
// Error types used across the library.
//
// NumericalError: a root bracket or iteration failed to converge.  CLI exit 3.
// CodebookError:  random codebook construction exhausted its retry budget.
//                 CLI exit 4.
// std::domain_error (from <stdexcept>) marks invalid parameter values.  CLI
// exit 2.

#include <stdexcept>
#include <string>

namespace bscfb {

class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class CodebookError : public std::runtime_error {
public:
    explicit CodebookError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace bscfb
