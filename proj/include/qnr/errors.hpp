#pragma once

#include <stdexcept>
#include <string>

namespace qnr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QNR_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

QNR_DEFINE_ERROR(NotHermitian);
QNR_DEFINE_ERROR(NoConvergence);
QNR_DEFINE_ERROR(InvalidMatrix);
QNR_DEFINE_ERROR(InvalidEllipse);
QNR_DEFINE_ERROR(GridMismatch);
QNR_DEFINE_ERROR(NotQuadratic);
QNR_DEFINE_ERROR(DefectiveDecomposition);
QNR_DEFINE_ERROR(InvalidNorms);
QNR_DEFINE_ERROR(DegenerateEigenvalues);
QNR_DEFINE_ERROR(TooManyCoefficients);
QNR_DEFINE_ERROR(InvalidParameter);
QNR_DEFINE_ERROR(WeightNotAdmissible);
QNR_DEFINE_ERROR(UnboundedModel);
QNR_DEFINE_ERROR(ParseError);

#undef QNR_DEFINE_ERROR

}  // namespace qnr
