#include "mixsa/error.hpp"

namespace mixsa {

namespace {

std::string compose(const std::string& module, const std::string& what,
                    std::optional<std::size_t> iteration)
{
    std::string out = module + ": " + what;
    if (iteration)
    {
        out += " (iteration " + std::to_string(*iteration) + ")";
    }
    return out;
}

}  // namespace

NumericError::NumericError(std::string module, const std::string& what,
                           std::optional<std::size_t> iteration)
    : std::runtime_error(compose(module, what, iteration)),
      module_(std::move(module)),
      message_(what),
      iteration_(iteration)
{
}

NumericError NumericError::at_iteration(std::size_t i) const
{
    if (iteration_)
    {
        return *this;
    }
    return NumericError(module_, message_, i);
}

}  // namespace mixsa
