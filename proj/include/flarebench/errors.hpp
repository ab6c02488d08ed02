#pragma once

#include <stdexcept>
#include <string>

namespace flarebench {

/// Base class for all flarebench errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A config or argument failed validation. Message names the offending field.
struct InvalidArgument : Error {
    using Error::Error;
};

/// Frame too small for the requested flare footprint.
struct DegenerateInput : Error {
    using Error::Error;
};

/// Dataset directory contains no usable images.
struct EmptyDataset : Error {
    using Error::Error;
};

/// Scene geometry is impossible (car box outside frame, etc.).
struct InvalidScene : Error {
    using Error::Error;
};

/// No target-class detection in any frame of a sequence.
struct NoTarget : Error {
    using Error::Error;
};

struct EmptySignal : Error {
    using Error::Error;
};

struct InsufficientSamples : Error {
    using Error::Error;
};

/// Degenerate region for a histogram computation.
struct InvalidRegion : Error {
    using Error::Error;
};

/// Empty frame set or zero repetitions handed to the benchmark.
struct EmptyInput : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

/// Wire protocol violation: bad framing, missing fields, wrong types.
struct ProtocolError : Error {
    using Error::Error;
};

/// Worker did not answer within the configured timeout.
struct WorkerTimeout : Error {
    using Error::Error;
};

/// Worker process exited or closed its pipes mid-conversation.
struct WorkerCrashed : Error {
    using Error::Error;
};

}  // namespace flarebench
