#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace proxyvote {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Bad arguments or configuration (bounds, empty sets, k > n - 1, ...).
class InvalidInput : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

/// Malformed input file. `line()` is 1-based and counts the header row.
class ParseError : public Error {
  public:
    ParseError(std::string file, std::size_t line, const std::string& what);

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

  private:
    std::string file_;
    std::size_t line_;
};

/// A structurally invalid network. Carries every violation found.
class ValidationError : public Error {
  public:
    explicit ValidationError(std::vector<std::string> violations);

    const std::vector<std::string>& violations() const noexcept { return violations_; }

  private:
    std::vector<std::string> violations_;
};

class StrandedTrustError : public Error {
  public:
    explicit StrandedTrustError(std::vector<std::size_t> stranded);

    const std::vector<std::size_t>& stranded_nodes() const noexcept { return stranded_; }

  private:
    std::vector<std::size_t> stranded_;
};

class NoConvergenceError : public Error {
  public:
    NoConvergenceError(std::size_t iterations, double residual);

    std::size_t iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

  private:
    std::size_t iterations_;
    double residual_;
};

class SingularSystemError : public Error {
  public:
    using Error::Error;
};

}  // namespace proxyvote
