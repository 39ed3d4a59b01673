#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hw {

enum class ErrorKind {
    ZeroDeterminant,
    NegativeDeterminant,
    MixedSurdEntries,
    CyclicRules,
    NotPrime,
    EvenLevelForM2,
    EigenvalueResidue,
    NoAdmissiblePairing,
    ChainStepMismatch,
    NotFourTermShape,
    BNotInvolution,
    BadPivot,
    EpsilonFiniteOrder,
    LemmaInapplicable,
    NoSuchFactorization,
    PointTooLow,
    InsufficientTerms,
    UnresolvedSymbol,
    StepFailed,
    Parse,
    InvalidArgument,
};

std::string_view to_string(ErrorKind k);

// Every failure in the library is reported through this type; `kind()`
// is the stable, machine-readable part and what the CLI puts in its JSON.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Parse errors carry a 1-based line/column into the offending text.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(ErrorKind::Parse, what + " at " + std::to_string(line) + ":" + std::to_string(column)),
          reason_(what), line_(line), column_(column) {}

    const std::string& reason() const noexcept { return reason_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    std::string reason_;
    int line_;
    int column_;
};

} // namespace hw
