#include "proxyvote/errors.hpp"

#include <sstream>

namespace proxyvote {

namespace {

std::string join_violations(const std::vector<std::string>& v) {
    std::ostringstream os;
    os << v.size() << " validation error(s)";
    for (const auto& s : v) os << "\n  " << s;
    return os.str();
}

std::string stranded_message(const std::vector<std::size_t>& ids) {
    std::ostringstream os;
    os << ids.size() << " node(s) cannot reach any active node:";
    const std::size_t shown = ids.size() < 20 ? ids.size() : 20;
    for (std::size_t i = 0; i < shown; ++i) os << ' ' << ids[i];
    if (shown < ids.size()) os << " ...";
    return os.str();
}

}  // namespace

ParseError::ParseError(std::string file, std::size_t line, const std::string& what)
    : Error(file + ":" + std::to_string(line) + ": " + what), file_(std::move(file)), line_(line) {}

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error(join_violations(violations)), violations_(std::move(violations)) {}

StrandedTrustError::StrandedTrustError(std::vector<std::size_t> stranded)
    : Error(stranded_message(stranded)), stranded_(std::move(stranded)) {}

NoConvergenceError::NoConvergenceError(std::size_t iterations, double residual)
    : Error("no convergence after " + std::to_string(iterations) +
            " sweeps (residual " + std::to_string(residual) + ")"),
      iterations_(iterations),
      residual_(residual) {}

}  // namespace proxyvote
