#ifndef RIESZLAB_ERRORS_HPP
#define RIESZLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rieszlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedDesign : Error {
    using Error::Error;
};
struct DimensionTooLarge : Error {
    using Error::Error;
};
struct NoExactRoute : Error {
    using Error::Error;
};
struct InexactMoments : Error {
    using Error::Error;
};
struct IndexOutOfRange : Error {
    using Error::Error;
};
struct DependenceUnknown : Error {
    using Error::Error;
};
struct LengthMismatch : Error {
    using Error::Error;
};
struct NonDifferentiable : Error {
    using Error::Error;
};
struct InvalidAlpha : Error {
    using Error::Error;
};
struct InvalidConjugatePair : Error {
    using Error::Error;
};
struct ConfigInvalid : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

}  // namespace rieszlab

#endif
