#pragma once

#include <stdexcept>
#include <string>

namespace schurlab {

// Base of every error raised by the library. `kind()` carries the stable
// machine-readable name that ends up in reports.
class error : public std::runtime_error {
public:
    error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

    [[nodiscard]] const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define SCHURLAB_ERROR(Name)                                              \
    class Name : public error {                                           \
    public:                                                               \
        explicit Name(const std::string& what) : error(#Name, what) {}    \
    }

SCHURLAB_ERROR(InsufficientDerivatives);
SCHURLAB_ERROR(OrderMismatch);
SCHURLAB_ERROR(NumericalFailure);
SCHURLAB_ERROR(IndexOutOfRange);
SCHURLAB_ERROR(InvalidArgument);
SCHURLAB_ERROR(GridMismatch);
SCHURLAB_ERROR(ArityMismatch);
SCHURLAB_ERROR(ResolutionTooLow);
SCHURLAB_ERROR(DimensionMismatch);
SCHURLAB_ERROR(PoleAtOne);
SCHURLAB_ERROR(NodeCoincidence);
SCHURLAB_ERROR(UnsupportedOrder);
SCHURLAB_ERROR(NonConvergence);
SCHURLAB_ERROR(ResolutionInsufficient);
SCHURLAB_ERROR(SeriesDivergence);
SCHURLAB_ERROR(RegimeViolation);
SCHURLAB_ERROR(ConfigInvalid);
SCHURLAB_ERROR(IoFailure);

#undef SCHURLAB_ERROR

}  // namespace schurlab
