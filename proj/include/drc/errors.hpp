// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DRC_ERRORS_HPP_
#define DRC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace drc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DRC_DEFINE_ERROR(Name)           \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

DRC_DEFINE_ERROR(OutOfRange);
DRC_DEFINE_ERROR(UnknownAbbreviation);
DRC_DEFINE_ERROR(UnknownElement);
DRC_DEFINE_ERROR(MalformedRelation);
DRC_DEFINE_ERROR(InvalidTransaction);
DRC_DEFINE_ERROR(SizeTooLarge);
DRC_DEFINE_ERROR(IncoherentSet);
DRC_DEFINE_ERROR(NotAMember);
DRC_DEFINE_ERROR(IoFailure);
DRC_DEFINE_ERROR(SchemaMismatch);
DRC_DEFINE_ERROR(IntegrityViolation);
DRC_DEFINE_ERROR(UnknownTemplate);
DRC_DEFINE_ERROR(NoPendingConfirmation);
DRC_DEFINE_ERROR(PendingConfirmationConflict);
DRC_DEFINE_ERROR(ViewMutation);
DRC_DEFINE_ERROR(AlreadyMember);
DRC_DEFINE_ERROR(UnknownRelation);

#undef DRC_DEFINE_ERROR

}  // namespace drc

#endif  // DRC_ERRORS_HPP_
