#include "cll/errors.hpp"

namespace cll {

const char* err_name(Err e) {
  switch (e) {
    case Err::Ok: return "Ok";
    case Err::InvalidArgument: return "InvalidArgument";
    case Err::InvalidTable: return "InvalidTable";
    case Err::NotAssociative: return "NotAssociative";
    case Err::NoIdentity: return "NoIdentity";
    case Err::NoInverse: return "NoInverse";
    case Err::InvalidAction: return "InvalidAction";
    case Err::NotNormal: return "NotNormal";
    case Err::NotHomomorphism: return "NotHomomorphism";
    case Err::OrdersNotCoprime: return "OrdersNotCoprime";
    case Err::CapExceeded: return "CapExceeded";
    case Err::NotCocycle: return "NotCocycle";
    case Err::SearchExhausted: return "SearchExhausted";
    case Err::NoSuchLift: return "NoSuchLift";
    case Err::NotUnique: return "NotUnique";
    case Err::NotGenerating: return "NotGenerating";
    case Err::QNotCoprime: return "QNotCoprime";
    case Err::AlphaNotCoprime: return "AlphaNotCoprime";
    case Err::BadPrimeForClass: return "BadPrimeForClass";
    case Err::BadIndex: return "BadIndex";
    case Err::NotInCommutatorPart: return "NotInCommutatorPart";
    case Err::NotCentral: return "NotCentral";
    case Err::LayerSingular: return "LayerSingular";
    case Err::VerificationFailed: return "VerificationFailed";
    case Err::InconsistentPrescription: return "InconsistentPrescription";
    case Err::RelatorNotKilled: return "RelatorNotKilled";
    case Err::WitnessSearchFailed: return "WitnessSearchFailed";
    case Err::ParseError: return "ParseError";
    case Err::IoError: return "IoError";
    case Err::Internal: return "Internal";
  }
  return "Unknown";
}

void fail(Err code, const std::string& msg) { throw Error(code, msg); }

}  // namespace cll
