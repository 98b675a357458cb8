#pragma once

#include <stdexcept>
#include <string>

namespace pcad {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad inputs, files, configs, or violated call contracts. CLI exit code 2.
struct InputError : Error {
    using Error::Error;
};

// Data-driven numerical failures (degenerate series, unusable variance).
// CLI exit code 3.
struct NumericError : Error {
    using Error::Error;
};

#define PCAD_DEFINE_ERROR(NAME, BASE) \
    struct NAME final : BASE {        \
        explicit NAME(const std::string& msg) : BASE(msg) {} \
    }

PCAD_DEFINE_ERROR(NonPositivePeriod, InputError);
PCAD_DEFINE_ERROR(EmptySeries, InputError);
PCAD_DEFINE_ERROR(TooFewSamples, InputError);
PCAD_DEFINE_ERROR(OverAggressiveRemoval, NumericError);
PCAD_DEFINE_ERROR(DegenerateSeries, NumericError);
PCAD_DEFINE_ERROR(ZeroVariance, NumericError);
PCAD_DEFINE_ERROR(LengthMismatch, InputError);
PCAD_DEFINE_ERROR(NonPowerOfTwoLength, InputError);
PCAD_DEFINE_ERROR(KTooLarge, InputError);
PCAD_DEFINE_ERROR(EmptyInput, InputError);
PCAD_DEFINE_ERROR(InconsistentState, InputError);
PCAD_DEFINE_ERROR(TooFewSeries, InputError);
PCAD_DEFINE_ERROR(SampleTooLarge, InputError);
PCAD_DEFINE_ERROR(MTooLarge, InputError);
PCAD_DEFINE_ERROR(MissingId, InputError);
PCAD_DEFINE_ERROR(IoError, InputError);
PCAD_DEFINE_ERROR(ParseError, InputError);
PCAD_DEFINE_ERROR(MissingPeriod, InputError);
PCAD_DEFINE_ERROR(ConfigError, InputError);
PCAD_DEFINE_ERROR(BadSpec, InputError);

#undef PCAD_DEFINE_ERROR

}  // namespace pcad
