// Copyright 2026 The blecert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy of
// the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations under
// the License.

#include "blecert/error.hpp"

namespace blecert {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::RandomnessFailure: return "RandomnessFailure";
    case Errc::InvalidScalar: return "InvalidScalar";
    case Errc::InvalidPoint: return "InvalidPoint";
    case Errc::IdentityResult: return "IdentityResult";
    case Errc::ZeroSecret: return "ZeroSecret";
    case Errc::AuthFailure: return "AuthFailure";
    case Errc::ReplayDetected: return "ReplayDetected";
    case Errc::BadHex: return "BadHex";
    case Errc::BadLength: return "BadLength";
    case Errc::BadVersion: return "BadVersion";
    case Errc::BadAddress: return "BadAddress";
    case Errc::DuplicateManufacturer: return "DuplicateManufacturer";
    case Errc::RequestRejected: return "RequestRejected";
    case Errc::DuplicateSerial: return "DuplicateSerial";
    case Errc::UnknownSerial: return "UnknownSerial";
    case Errc::BadSubjectKey: return "BadSubjectKey";
    case Errc::WrongRole: return "WrongRole";
    case Errc::WrongState: return "WrongState";
    case Errc::NotEstablished: return "NotEstablished";
    case Errc::MalformedMessage: return "MalformedMessage";
    case Errc::UnknownDevice: return "UnknownDevice";
    case Errc::BadFragmentCount: return "BadFragmentCount";
    case Errc::BadParameter: return "BadParameter";
    case Errc::Io: return "Io";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace blecert
