#pragma once

#include <stdexcept>
#include <string>

namespace unicon {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define UNICON_DEFINE_ERROR(Name)      \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  }

UNICON_DEFINE_ERROR(PointOutsideDomain);
UNICON_DEFINE_ERROR(MetricNotPositiveDefinite);
UNICON_DEFINE_ERROR(JetOrderUnsupported);
UNICON_DEFINE_ERROR(UnknownPreset);
UNICON_DEFINE_ERROR(BadParams);
UNICON_DEFINE_ERROR(DimensionMismatch);
UNICON_DEFINE_ERROR(MissingBinding);
UNICON_DEFINE_ERROR(ExtraBinding);
UNICON_DEFINE_ERROR(CaseUnknown);
UNICON_DEFINE_ERROR(SchemaError);

#undef UNICON_DEFINE_ERROR

}  // namespace unicon
