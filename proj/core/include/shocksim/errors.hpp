#pragma once

#include <stdexcept>
#include <string>

namespace shocksim {

/// Base class for all numerical-module failures. Carries a short context
/// string so the CLI can surface the failing module and state.
class SimError : public std::runtime_error {
public:
    explicit SimError(const std::string& what) : std::runtime_error(what) {}
};

#define SHOCKSIM_DEFINE_ERROR(Name)                                      \
    class Name : public SimError {                                       \
    public:                                                              \
        explicit Name(const std::string& what) : SimError(#Name ": " + what) {} \
    }

SHOCKSIM_DEFINE_ERROR(DegenerateFamily);
SHOCKSIM_DEFINE_ERROR(OutOfRadius);
SHOCKSIM_DEFINE_ERROR(TrajectoryStall);
SHOCKSIM_DEFINE_ERROR(BoundViolated);
SHOCKSIM_DEFINE_ERROR(NearPoleRotation);
SHOCKSIM_DEFINE_ERROR(PastBlowup);
SHOCKSIM_DEFINE_ERROR(GridTooCoarse);
SHOCKSIM_DEFINE_ERROR(HessianDegenerate);
SHOCKSIM_DEFINE_ERROR(PicardDiverged);
SHOCKSIM_DEFINE_ERROR(BlowupReached);
SHOCKSIM_DEFINE_ERROR(CFLAccuracy);
SHOCKSIM_DEFINE_ERROR(NonFinite);
SHOCKSIM_DEFINE_ERROR(CharacteristicsCrossed);
SHOCKSIM_DEFINE_ERROR(NoBlowupInWindow);
SHOCKSIM_DEFINE_ERROR(InsufficientRange);
SHOCKSIM_DEFINE_ERROR(KappaTooSmall);
SHOCKSIM_DEFINE_ERROR(PerturbationTooLarge);
SHOCKSIM_DEFINE_ERROR(ConfigError);

#undef SHOCKSIM_DEFINE_ERROR

} // namespace shocksim
