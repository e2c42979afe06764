#pragma once

#include <stdexcept>
#include <string>

namespace plg {

enum class Errc {
    InvalidArgument,
    Parse,
    InvalidNetlist,
    IncompleteWiring,
    CombinationalLoop,
    NotOscillating,
    ContentionDetected,
    ThresholdUnreachable,
    CalibrationFailed,
    Underdetermined,
    DegenerateData,
    UnmappedSegment,
    NumericalInstability,
    TraceTooShort,
    Io,
};

const char* to_string(Errc code) noexcept;

/// Base of every exception thrown by the library. The code lets callers
/// (the CLI in particular) classify failures without a cascade of catches.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

template <Errc C>
class ErrorOf : public Error {
public:
    explicit ErrorOf(const std::string& what) : Error(C, what) {}
};

using InvalidArgument = ErrorOf<Errc::InvalidArgument>;
using InvalidNetlist = ErrorOf<Errc::InvalidNetlist>;
using IncompleteWiring = ErrorOf<Errc::IncompleteWiring>;
using CombinationalLoop = ErrorOf<Errc::CombinationalLoop>;
using NotOscillating = ErrorOf<Errc::NotOscillating>;
using ContentionDetected = ErrorOf<Errc::ContentionDetected>;
using ThresholdUnreachable = ErrorOf<Errc::ThresholdUnreachable>;
using CalibrationFailed = ErrorOf<Errc::CalibrationFailed>;
using Underdetermined = ErrorOf<Errc::Underdetermined>;
using DegenerateData = ErrorOf<Errc::DegenerateData>;
using UnmappedSegment = ErrorOf<Errc::UnmappedSegment>;
using NumericalInstability = ErrorOf<Errc::NumericalInstability>;
using TraceTooShort = ErrorOf<Errc::TraceTooShort>;
using IoError = ErrorOf<Errc::Io>;

}  // namespace plg
