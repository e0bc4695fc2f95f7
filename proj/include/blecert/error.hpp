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

#pragma once

#include <stdexcept>
#include <string>

namespace blecert {

enum class Errc {
  RandomnessFailure,
  InvalidScalar,
  InvalidPoint,
  IdentityResult,
  ZeroSecret,
  AuthFailure,
  ReplayDetected,
  BadHex,
  BadLength,
  BadVersion,
  BadAddress,
  DuplicateManufacturer,
  RequestRejected,
  DuplicateSerial,
  UnknownSerial,
  BadSubjectKey,
  WrongRole,
  WrongState,
  NotEstablished,
  MalformedMessage,
  UnknownDevice,
  BadFragmentCount,
  BadParameter,
  Io,
  Internal,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  explicit Error(Errc code) : Error(code, to_string(code)) {}
  Error(Errc code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace blecert
