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

#include <json.hpp>

#include "blecert/certificate.hpp"
#include "blecert/energy.hpp"
#include "blecert/sim.hpp"

namespace blecert {

nlohmann::ordered_json to_json(const CertSizeReport& report);
nlohmann::ordered_json to_json(const BleCertificate& cert);
nlohmann::ordered_json to_json(const sim::ScenarioReport& report);
nlohmann::ordered_json to_json(const energy::CryptoCostTable& table);

}  // namespace blecert
