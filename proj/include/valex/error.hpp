#ifndef VALEX_ERROR_HPP
#define VALEX_ERROR_HPP

#include <stdexcept>
#include <string>

namespace valex {

// Malformed input files, inconsistent banks/lexica, missing keys.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated numeric preconditions or invariants.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace valex

#endif
