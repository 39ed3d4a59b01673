#include "hw/error.hpp"

namespace hw {

std::string_view to_string(ErrorKind k)
{
    switch (k) {
    case ErrorKind::ZeroDeterminant: return "ZeroDeterminant";
    case ErrorKind::NegativeDeterminant: return "NegativeDeterminant";
    case ErrorKind::MixedSurdEntries: return "MixedSurdEntries";
    case ErrorKind::CyclicRules: return "CyclicRules";
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::EvenLevelForM2: return "EvenLevelForM2";
    case ErrorKind::EigenvalueResidue: return "EigenvalueResidue";
    case ErrorKind::NoAdmissiblePairing: return "NoAdmissiblePairing";
    case ErrorKind::ChainStepMismatch: return "ChainStepMismatch";
    case ErrorKind::NotFourTermShape: return "NotFourTermShape";
    case ErrorKind::BNotInvolution: return "BNotInvolution";
    case ErrorKind::BadPivot: return "BadPivot";
    case ErrorKind::EpsilonFiniteOrder: return "EpsilonFiniteOrder";
    case ErrorKind::LemmaInapplicable: return "LemmaInapplicable";
    case ErrorKind::NoSuchFactorization: return "NoSuchFactorization";
    case ErrorKind::PointTooLow: return "PointTooLow";
    case ErrorKind::InsufficientTerms: return "InsufficientTerms";
    case ErrorKind::UnresolvedSymbol: return "UnresolvedSymbol";
    case ErrorKind::StepFailed: return "StepFailed";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

} // namespace hw
