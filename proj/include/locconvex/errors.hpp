#ifndef LOCCONVEX_ERRORS_HPP
#define LOCCONVEX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace locconvex {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularInput : Error {
  using Error::Error;
};

struct NegativeOrientation : Error {
  using Error::Error;
};

struct NotUnit : Error {
  using Error::Error;
};

struct NotSkew : Error {
  using Error::Error;
};

struct NotSpecialOrthogonal : Error {
  using Error::Error;
};

struct StepTooLarge : Error {
  std::size_t index;
  StepTooLarge(std::size_t k, const std::string& msg) : Error(msg), index(k) {}
};

struct DegeneratePivot : Error {
  int column;
  DegeneratePivot(int col, const std::string& msg) : Error(msg), column(col) {}
};

struct ParseError : Error {
  std::size_t position;
  ParseError(std::size_t pos, const std::string& msg) : Error(msg), position(pos) {}
};

struct BadSignature : Error {
  using Error::Error;
};

struct NoStableCell : Error {
  using Error::Error;
};

struct NotGeneric : Error {
  double t;
  NotGeneric(double where, const std::string& msg) : Error(msg), t(where) {}
};

struct BadLength : Error {
  using Error::Error;
};

struct NonPositiveCoefficient : Error {
  int index;
  double t;
  NonPositiveCoefficient(int i, double where, const std::string& msg)
      : Error(msg), index(i), t(where) {}
};

struct ConditionViolated : Error {
  std::string which;
  double t;
  ConditionViolated(std::string cond, double where, const std::string& msg)
      : Error(msg), which(std::move(cond)), t(where) {}
};

struct PairConditionViolated : Error {
  std::string which;
  double t;
  PairConditionViolated(std::string cond, double where, const std::string& msg)
      : Error(msg), which(std::move(cond)), t(where) {}
};

struct TangencyUnresolved : Error {
  double t;
  TangencyUnresolved(double where, const std::string& msg) : Error(msg), t(where) {}
};

struct ImmersionLost : Error {
  double t;
  ImmersionLost(double where, const std::string& msg) : Error(msg), t(where) {}
};

struct FirstCoordinateVanishes : Error {
  double t;
  FirstCoordinateVanishes(double where, const std::string& msg) : Error(msg), t(where) {}
};

struct WindowOverflow : Error {
  using Error::Error;
};

struct CurvatureUnderflow : Error {
  double t;
  CurvatureUnderflow(double where, const std::string& msg) : Error(msg), t(where) {}
};

struct Inconclusive : Error {
  using Error::Error;
};

struct InvalidInput : Error {
  using Error::Error;
};

}  // namespace locconvex

#endif
