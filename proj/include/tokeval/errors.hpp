#pragma once

#include <stdexcept>
#include <string>

namespace tokeval {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Bad configuration: unknown method name, invalid alpha, missing resources
// required by the selected method, and similar caller mistakes.
class ConfigError : public Error {
public:
  using Error::Error;
};

// Malformed input file. Messages carry the file path and a 0-based line
// (or row, or byte) position.
class ParseError : public Error {
public:
  using Error::Error;
};

// Semantically invalid data: gold morphs that do not concatenate to their
// word, misaligned prediction/gold streams, out-of-range stimulus fields,
// merge rules inconsistent with the vocabulary.
class DataError : public Error {
public:
  using Error::Error;
};

// A segmentation could not be produced or is malformed: unmatchable input
// under fallback=error, marker in an illegal position, a token boundary
// inside a multi-byte character, a symbol outside the byte-level image.
class SegmentationError : public Error {
public:
  using Error::Error;
};

// Pearson correlation is undefined for the given input (constant series or
// fewer than two points).
class CorrelationError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace tokeval
