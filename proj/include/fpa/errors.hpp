#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fpa {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Dimensions of two operands do not agree, or a rectangle falls outside an image.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A value is outside its numeric domain (non-finite input, pixel magnitude
/// beyond the 16-bit working range, ...).
class NumericDomainError : public Error {
public:
    using Error::Error;
};

/// A parameter is outside its documented range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A pixel is outside [0, 255] where an 8-bit image is required.
class PixelRangeError : public Error {
public:
    using Error::Error;
};

/// A filter entry is too small for stable deconvolution.
class IllConditionedFilterError : public Error {
public:
    using Error::Error;
};

/// An inverse transform that should have produced a real plane did not.
class InternalConsistencyError : public Error {
public:
    using Error::Error;
};

/// A key string does not match the key grammar. Carries the 1-based index of
/// the offending token (0 when the problem is the token count itself).
class KeyFormatError : public Error {
public:
    KeyFormatError(const std::string& what, int token_index)
        : Error(what + " (token " + std::to_string(token_index) + ")"),
          token_index_(token_index) {}

    int token_index() const { return token_index_; }

private:
    int token_index_;
};

/// A key cannot be used with an image of the given size.
class KeyIncompatibleError : public Error {
public:
    using Error::Error;
};

/// Too many distinct modification points were requested for the image size.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// A file is not in a supported image format.
class FormatError : public Error {
public:
    using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace fpa
