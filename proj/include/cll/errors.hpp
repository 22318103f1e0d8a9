#pragma once
#include <stdexcept>
#include <string>

namespace cll {

enum class Err : int {
  Ok = 0,
  InvalidArgument,
  InvalidTable,
  NotAssociative,
  NoIdentity,
  NoInverse,
  InvalidAction,
  NotNormal,
  NotHomomorphism,
  OrdersNotCoprime,
  CapExceeded,
  NotCocycle,
  SearchExhausted,
  NoSuchLift,
  NotUnique,
  NotGenerating,
  QNotCoprime,
  AlphaNotCoprime,
  BadPrimeForClass,
  BadIndex,
  NotInCommutatorPart,
  NotCentral,
  LayerSingular,
  VerificationFailed,
  InconsistentPrescription,
  RelatorNotKilled,
  WitnessSearchFailed,
  ParseError,
  IoError,
  Internal,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] void fail(Err code, const std::string& msg);

inline void require(bool cond, Err code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace cll
