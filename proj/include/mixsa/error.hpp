#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mixsa {

/// Malformed experiment configuration or command line. Maps to exit code 2.
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A numerical failure inside an algorithm (zero marginal, non-finite
/// observation, weight underflow). Carries the module name and, when the
/// failure happened inside an iteration, its 1-based index.
class NumericError : public std::runtime_error
{
public:
    NumericError(std::string module, const std::string& what,
                 std::optional<std::size_t> iteration = std::nullopt);

    const std::string& module() const noexcept { return module_; }
    std::optional<std::size_t> iteration() const noexcept { return iteration_; }

    /// Same error, tagged with an iteration index (keeps an existing tag).
    NumericError at_iteration(std::size_t i) const;

private:
    std::string module_;
    std::string message_;
    std::optional<std::size_t> iteration_;
};

}  // namespace mixsa
