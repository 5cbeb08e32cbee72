#pragma once

#include <stdexcept>
#include <string>

namespace bdelta {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimMismatchError : Error {
    using Error::Error;
};
struct NotHermitianError : Error {
    using Error::Error;
};
struct NotPSDError : Error {
    using Error::Error;
};
struct SingularError : Error {
    using Error::Error;
};
struct NotStrictContractionError : Error {
    using Error::Error;
};
struct OutsideDiskError : Error {
    using Error::Error;
};
struct OutsideDomainError : Error {
    using Error::Error;
};
struct OutOfRangeError : Error {
    using Error::Error;
};
struct AnnulusOriginError : Error {
    using Error::Error;
};
struct UnsupportedError : Error {
    using Error::Error;
};
struct ExhaustedError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct ValidationError : Error {
    using Error::Error;
};
struct DependentVectorsError : Error {
    using Error::Error;
};
struct NotCommutingError : Error {
    using Error::Error;
};
struct ShapeMismatchError : Error {
    using Error::Error;
};
struct ModulusViolationError : Error {
    using Error::Error;
};
struct BisectionFailedError : Error {
    using Error::Error;
};

} // namespace bdelta
