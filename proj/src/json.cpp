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

#include "blecert/json.hpp"

namespace blecert {

using nlohmann::ordered_json;

ordered_json to_json(const CertSizeReport& report) {
  ordered_json fields = ordered_json::array();
  for (const auto& f : report.fields) {
    fields.push_back({{"field", f.field},
                      {"no_profile", f.x509_bytes},
                      {"ble_profiled", f.ble_bytes}});
  }
  return {{"fields", fields},
          {"total_no_profile", report.x509_total},
          {"total_ble_profiled", report.ble_total},
          {"reduction_percent", report.reduction_percent}};
}

ordered_json to_json(const BleCertificate& cert) {
  return {{"version", cert.version},
          {"serial", cert.subject_address().to_string()},
          {"subject_public_key", to_hex(cert.subject_public_key)},
          {"signature_r", to_hex(cert.signature.r)},
          {"signature_s", to_hex(cert.signature.s)}};
}

ordered_json to_json(const sim::ScenarioReport& report) {
  ordered_json out = {
      {"scenario", report.scenario},
      {"strategy", sim::to_string(report.strategy)},
      {"mode", report.mode == pairing::Mode::Certificate ? "certificate"
                                                         : "baseline"},
      {"seed", report.seed},
      {"outcome", sim::to_string(report.outcome)},
      {"frames_exchanged", report.frames_exchanged},
      {"abort_reason", nullptr},
      {"ltk_match", nullptr},
      {"session_probe_ok", nullptr},
      {"adversary_holds_session_key", report.adversary_holds_session_key},
      {"transcript_exposes_secrets", report.transcript_exposes_secrets},
      {"central_state", pairing::to_string(report.central_state)},
      {"peripheral_state", pairing::to_string(report.peripheral_state)},
      {"notes", report.notes},
  };
  if (report.abort_reason) out["abort_reason"] = *report.abort_reason;
  if (report.ltk_match) out["ltk_match"] = *report.ltk_match;
  if (report.session_probe_ok) out["session_probe_ok"] = *report.session_probe_ok;
  return out;
}

ordered_json to_json(const energy::CryptoCostTable& table) {
  ordered_json out = ordered_json::object();
  for (const auto& [name, value] : table.as_reported()) out[name] = value;
  return out;
}

}  // namespace blecert
