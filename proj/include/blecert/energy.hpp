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

#include <utility>
#include <vector>
#include <string>

// Per-connection-event radio energy and the cryptographic cost of the
// certificate handshake. Radio terms are in microjoules; per-operation crypto
// costs are reported in millijoules.
namespace blecert::energy {

inline constexpr double kDefaultHeaderBytes = 14.0;
inline constexpr double kDefaultMaxPayload = 251.0;

// Radio constants have no defaults; only the header length is fixed.
struct EnergyParams {
  double wakeup_uj = 0.0;         // E_WU
  double tx_uj_per_byte = 0.0;    // E_TX
  double rx_uj_per_byte = 0.0;    // E_RX
  double ifs_uj = 0.0;            // E_IFS
  double sleep_uj = 0.0;          // E_SLP
  double header_bytes = kDefaultHeaderBytes;  // l_HDR
  double max_payload_bytes = kDefaultMaxPayload;
};

// Parses flat key=value text (keys E_WU, E_TX, E_RX, E_IFS, E_SLP, l_HDR,
// max_payload; '#' starts a comment). The five radio constants are required.
// Throws Error(Errc::BadParameter).
EnergyParams parse_params(const std::string& text);

// Measured costs on an ARM Cortex-M0+. Per-operation entries are held in
// microjoules so sums stay exact; per-byte entries are microjoules per byte.
struct CryptoCostTable {
  double ecdhe_uj = 34130.0;
  double ecdsa_sign_uj = 11860.0;
  double ecdsa_verify_uj = 35090.0;
  double sha256_digest_uj_per_byte = 0.041;
  double sha256_hmac_uj_per_byte = 0.056;
  double aes128_uj_per_byte = 0.134;

  // Table units: mJ/op for the three ECC rows, uJ/B for the rest.
  std::vector<std::pair<std::string, double>> as_reported() const;
};

// E_T = E_WU + n l_HDR E_RX + (2n - 1) E_IFS + (n l_HDR + l_P) E_TX + E_SLP.
// Throws Error(Errc::BadFragmentCount) for n < 1.
double tx_energy(const EnergyParams& params, double payload_bytes,
                 int fragments);

// E_R = E_WU + (n l_HDR + l_P) E_RX + (2n - 1) E_IFS + n l_HDR E_TX + E_SLP.
double rx_energy(const EnergyParams& params, double payload_bytes,
                 int fragments);

// Added crypto energy in mJ.
double pairing_overhead(const CryptoCostTable& table, int signs, int verifies,
                        int ecdh_ops);

int fragment_count(double payload_bytes, double max_payload_bytes);

struct TransferEnergy {
  int fragments = 0;
  double tx_uj = 0.0;
  double rx_uj = 0.0;
};

// Throws Error(Errc::BadParameter) for a non-positive size.
TransferEnergy cert_transfer_energy(const EnergyParams& params,
                                    double cert_size_bytes);

inline double to_millijoules(double microjoules) { return microjoules / 1000.0; }

}  // namespace blecert::energy
