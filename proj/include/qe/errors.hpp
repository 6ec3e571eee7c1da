#pragma once

#include <stdexcept>
#include <string>

namespace qe {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// Errors that signal a malformed request or contract violation.
class InputError : public Error {
public:
    using Error::Error;
};

/// Errors that signal a mathematical rejection of well-formed data.
class MathError : public Error {
public:
    using Error::Error;
};

#define QE_DEFINE_ERROR(Name, Base)                                   \
    class Name : public Base {                                        \
    public:                                                           \
        explicit Name(const std::string& msg) : Base(#Name, msg) {}  \
    };

QE_DEFINE_ERROR(NotIrreducible, InputError)
QE_DEFINE_ERROR(DegreeOverflow, InputError)
QE_DEFINE_ERROR(FieldMismatch, InputError)
QE_DEFINE_ERROR(DegreeMismatch, InputError)
QE_DEFINE_ERROR(InvalidParams, InputError)
QE_DEFINE_ERROR(ParseError, InputError)

QE_DEFINE_ERROR(NotDivisible, MathError)
QE_DEFINE_ERROR(NotASquare, MathError)
QE_DEFINE_ERROR(DegenerateQuartic, MathError)
QE_DEFINE_ERROR(NormalizationFailed, MathError)
QE_DEFINE_ERROR(RestorationFailed, MathError)
QE_DEFINE_ERROR(NotRational, MathError)
QE_DEFINE_ERROR(NotEnriques, MathError)
QE_DEFINE_ERROR(NotDivisibleEnough, MathError)
QE_DEFINE_ERROR(ZeroDiscriminant, MathError)
QE_DEFINE_ERROR(MultipleFiber, MathError)
QE_DEFINE_ERROR(NotMultiple, MathError)
QE_DEFINE_ERROR(NotI0Star, MathError)
QE_DEFINE_ERROR(FiberNotPreserved, MathError)
QE_DEFINE_ERROR(ShapeError, MathError)
QE_DEFINE_ERROR(InternalContradiction, MathError)

#undef QE_DEFINE_ERROR

}  // namespace qe
