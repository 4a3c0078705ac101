#include "rydsim/errors.hpp"

#include <sstream>

namespace rydsim {

namespace {

std::string summarize(const std::vector<Diagnostic>& diagnostics)
{
    std::ostringstream os;
    os << "invalid configuration";
    for (const auto& d : diagnostics) {
        os << "; " << d.path << ": " << d.reason;
    }
    return os.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<Diagnostic> diagnostics)
    : Error(summarize(diagnostics)), diagnostics_(std::move(diagnostics))
{
}

ConfigError::ConfigError(std::string path, std::string reason)
    : ConfigError(std::vector<Diagnostic>{{std::move(path), std::move(reason)}})
{
}

BlowUpError::BlowUpError(std::size_t step, double t)
    : Error("non-finite field values at step " + std::to_string(step) +
            " (t = " + std::to_string(t) + " us)"),
      step_(step),
      t_(t)
{
}

}  // namespace rydsim
