#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace denjoy {

using Complex = std::complex<double>;

// Bad input data or a violated mathematical precondition. The CLI maps
// these to exit code 1; malformed command lines map to exit code 2.
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// A solve that failed for numerical reasons (singular system, iteration
// cap, bracketing failure).
class solver_error : public std::runtime_error {
public:
    explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

// A missing or unwritable file; the CLI treats this as a usage error.
class file_error : public std::runtime_error {
public:
    explicit file_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double pi = 3.14159265358979323846;

} // namespace denjoy
