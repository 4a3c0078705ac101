#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rydsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One rejected configuration field: dotted path plus reason.
struct Diagnostic {
    std::string path;
    std::string reason;
};

/// Configuration rejected by validation. Carries all diagnostics found.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<Diagnostic> diagnostics);
    ConfigError(std::string path, std::string reason);

    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

/// Overlapping cylinders, zero separation for point laws, and similar.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Two profiles or a profile and a kernel do not share a grid.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// The grid cannot resolve the problem (e.g. tau_p < 10 dt).
class GridError : public Error {
public:
    using Error::Error;
};

/// Non-finite field values appeared during integration.
class BlowUpError : public Error {
public:
    BlowUpError(std::size_t step, double t);

    std::size_t step() const noexcept { return step_; }
    double time() const noexcept { return t_; }

private:
    std::size_t step_;
    double t_;
};

/// File emission or ingestion failed.
class IoError : public Error {
public:
    using Error::Error;
};

/// A derived observable is undefined for the given data.
class UndefinedObservable : public Error {
public:
    using Error::Error;
};

}  // namespace rydsim
