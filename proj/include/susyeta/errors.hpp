#pragma once

#include <stdexcept>
#include <string>

namespace susyeta {

// Base of every library failure.  kind() is the stable name used in reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

#define SUSYETA_ERROR(Name)                                                  \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(#Name, what) {}       \
    };

SUSYETA_ERROR(NonFiniteSample)
SUSYETA_ERROR(GridMismatch)
SUSYETA_ERROR(GridTooSmall)
SUSYETA_ERROR(PoleDetected)
SUSYETA_ERROR(TailMismatch)
SUSYETA_ERROR(UnknownEntry)
SUSYETA_ERROR(InvalidParams)
SUSYETA_ERROR(NotReal)
SUSYETA_ERROR(WrongEntry)
SUSYETA_ERROR(ZeroMode)
SUSYETA_ERROR(NoDecay)
SUSYETA_ERROR(MatchFailure)
SUSYETA_ERROR(KernelDetected)
SUSYETA_ERROR(NotPositiveDefinite)
SUSYETA_ERROR(AlphaOnSpectrum)
SUSYETA_ERROR(ConfigError)

#undef SUSYETA_ERROR

}  // namespace susyeta
