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

#include "blecert/energy.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "blecert/error.hpp"

namespace blecert::energy {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || !std::isfinite(out) || out < 0.0) {
    throw Error(Errc::BadParameter, "invalid value for " + key + ": " + value);
  }
  return out;
}

void check_fragments(int fragments) {
  if (fragments < 1) {
    throw Error(Errc::BadFragmentCount, "fragment count must be at least 1");
  }
}

}  // namespace

EnergyParams parse_params(const std::string& text) {
  EnergyParams params;
  std::optional<double> wu, tx, rx, ifs, slp;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::BadParameter,
                  "line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const double value = parse_number(key, trim(line.substr(eq + 1)));
    if (key == "E_WU") wu = value;
    else if (key == "E_TX") tx = value;
    else if (key == "E_RX") rx = value;
    else if (key == "E_IFS") ifs = value;
    else if (key == "E_SLP") slp = value;
    else if (key == "l_HDR") params.header_bytes = value;
    else if (key == "max_payload") params.max_payload_bytes = value;
    else throw Error(Errc::BadParameter, "unknown key " + key);
  }
  if (!wu || !tx || !rx || !ifs || !slp) {
    throw Error(Errc::BadParameter,
                "E_WU, E_TX, E_RX, E_IFS and E_SLP are all required");
  }
  if (params.max_payload_bytes <= 0.0) {
    throw Error(Errc::BadParameter, "max_payload must be positive");
  }
  params.wakeup_uj = *wu;
  params.tx_uj_per_byte = *tx;
  params.rx_uj_per_byte = *rx;
  params.ifs_uj = *ifs;
  params.sleep_uj = *slp;
  return params;
}

std::vector<std::pair<std::string, double>> CryptoCostTable::as_reported() const {
  return {
      {"P-256 ECDHE (mJ/op)", to_millijoules(ecdhe_uj)},
      {"P-256 ECDSA-Sign (mJ/op)", to_millijoules(ecdsa_sign_uj)},
      {"P-256 ECDSA-Verify (mJ/op)", to_millijoules(ecdsa_verify_uj)},
      {"SHA-256 Message Digest (uJ/B)", sha256_digest_uj_per_byte},
      {"SHA-256 HMAC (uJ/B)", sha256_hmac_uj_per_byte},
      {"AES-128 (uJ/B)", aes128_uj_per_byte},
  };
}

double tx_energy(const EnergyParams& p, double payload_bytes, int fragments) {
  check_fragments(fragments);
  const double n = fragments;
  return p.wakeup_uj + n * p.header_bytes * p.rx_uj_per_byte +
         (2.0 * n - 1.0) * p.ifs_uj +
         (n * p.header_bytes + payload_bytes) * p.tx_uj_per_byte + p.sleep_uj;
}

double rx_energy(const EnergyParams& p, double payload_bytes, int fragments) {
  check_fragments(fragments);
  const double n = fragments;
  return p.wakeup_uj + (n * p.header_bytes + payload_bytes) * p.rx_uj_per_byte +
         (2.0 * n - 1.0) * p.ifs_uj + n * p.header_bytes * p.tx_uj_per_byte +
         p.sleep_uj;
}

double pairing_overhead(const CryptoCostTable& table, int signs, int verifies,
                        int ecdh_ops) {
  if (signs < 0 || verifies < 0 || ecdh_ops < 0) {
    throw Error(Errc::BadParameter, "operation counts must be non-negative");
  }
  const double total_uj = signs * table.ecdsa_sign_uj +
                          verifies * table.ecdsa_verify_uj +
                          ecdh_ops * table.ecdhe_uj;
  return to_millijoules(total_uj);
}

int fragment_count(double payload_bytes, double max_payload_bytes) {
  if (payload_bytes <= 0.0 || max_payload_bytes <= 0.0) {
    throw Error(Errc::BadParameter, "sizes must be positive");
  }
  return static_cast<int>(std::ceil(payload_bytes / max_payload_bytes));
}

TransferEnergy cert_transfer_energy(const EnergyParams& params,
                                    double cert_size_bytes) {
  const int n = fragment_count(cert_size_bytes, params.max_payload_bytes);
  return {n, tx_energy(params, cert_size_bytes, n),
          rx_energy(params, cert_size_bytes, n)};
}

}  // namespace blecert::energy
