#pragma once

#include <stdexcept>
#include <string>

namespace rpcm {

/// Base class for all rpcm errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define RPCM_DEFINE_ERROR(Name)                                        \
    class Name : public Error {                                        \
    public:                                                            \
        explicit Name(const std::string& msg) : Error(msg) {}          \
    }

RPCM_DEFINE_ERROR(DomainError);              // argument outside its mathematical domain
RPCM_DEFINE_ERROR(DegenerateConfiguration);  // point configuration too thin for a solve
RPCM_DEFINE_ERROR(DegeneratePair);           // coincident points, pair gradient undefined
RPCM_DEFINE_ERROR(EmptyInput);
RPCM_DEFINE_ERROR(TooLarge);                 // exact clique guard
RPCM_DEFINE_ERROR(InsufficientPoints);
RPCM_DEFINE_ERROR(SingularCovariance);
RPCM_DEFINE_ERROR(InvariantViolation);       // data violates a documented type invariant
RPCM_DEFINE_ERROR(ParseError);
RPCM_DEFINE_ERROR(TooShort);                 // trajectory shorter than a requested segment
RPCM_DEFINE_ERROR(NoOverlap);
RPCM_DEFINE_ERROR(EmptyView);                // no landmark visible from a sensor pose

#undef RPCM_DEFINE_ERROR

}  // namespace rpcm
