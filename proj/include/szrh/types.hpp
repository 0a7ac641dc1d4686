#ifndef SZRH_TYPES_HPP
#define SZRH_TYPES_HPP

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace szrh {

inline constexpr const char* kToolVersion = "szrh 0.1.0";

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;
using IVector = Eigen::VectorXi;

inline constexpr double kPi = std::numbers::pi;
inline const Complex kI{0.0, 1.0};

/// Error codes for every failure mode the library reports.
enum class Errc {
  DuplicateBranchPoint,
  OddPointCount,
  TooFewPoints,
  DegreeMismatch,
  PathTooCloseToBranchPoint,
  ContinuationAmbiguous,
  QuadratureNotConverged,
  HomologyDegenerate,
  PathStartMismatch,
  NotSimpleBranchPoint,
  NotRiemannMatrix,
  ToleranceUnachievable,
  DegenerateOddCharacteristic,
  OnThetaDivisor,
  OnThetaDivisorInternal,
  NormalizationPointOnCut,
  TooCloseToBranchPoint,
  LoopEnclosesMultiplePoints,
  ContourTouchesCut,
  StencilCrossesThetaDivisor,
  StencilDegenerate,
  WrongSubsetSize,
  CharacteristicNotEven,
  ConfigParseError,
  DimensionMismatch,
  IoError,
  Internal,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DuplicateBranchPoint: return "DuplicateBranchPoint";
    case Errc::OddPointCount: return "OddPointCount";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::DegreeMismatch: return "DegreeMismatch";
    case Errc::PathTooCloseToBranchPoint: return "PathTooCloseToBranchPoint";
    case Errc::ContinuationAmbiguous: return "ContinuationAmbiguous";
    case Errc::QuadratureNotConverged: return "QuadratureNotConverged";
    case Errc::HomologyDegenerate: return "HomologyDegenerate";
    case Errc::PathStartMismatch: return "PathStartMismatch";
    case Errc::NotSimpleBranchPoint: return "NotSimpleBranchPoint";
    case Errc::NotRiemannMatrix: return "NotRiemannMatrix";
    case Errc::ToleranceUnachievable: return "ToleranceUnachievable";
    case Errc::DegenerateOddCharacteristic: return "DegenerateOddCharacteristic";
    case Errc::OnThetaDivisor: return "OnThetaDivisor";
    case Errc::OnThetaDivisorInternal: return "OnThetaDivisorInternal";
    case Errc::NormalizationPointOnCut: return "NormalizationPointOnCut";
    case Errc::TooCloseToBranchPoint: return "TooCloseToBranchPoint";
    case Errc::LoopEnclosesMultiplePoints: return "LoopEnclosesMultiplePoints";
    case Errc::ContourTouchesCut: return "ContourTouchesCut";
    case Errc::StencilCrossesThetaDivisor: return "StencilCrossesThetaDivisor";
    case Errc::StencilDegenerate: return "StencilDegenerate";
    case Errc::WrongSubsetSize: return "WrongSubsetSize";
    case Errc::CharacteristicNotEven: return "CharacteristicNotEven";
    case Errc::ConfigParseError: return "ConfigParseError";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::IoError: return "IoError";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace szrh

#endif  // SZRH_TYPES_HPP
