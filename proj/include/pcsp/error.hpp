#ifndef PCSP_ERROR_HPP
#define PCSP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace pcsp {

// Malformed input text or a value outside its declared range.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// A requested computation exceeds the configured size/node budget.
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// An operation precondition does not hold (signature mismatch, non-prime
// modulus, dimension mismatch, ...).
struct precondition_error : std::runtime_error {
    explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pcsp

#endif
