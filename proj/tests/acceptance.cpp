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

// Runs the end-to-end acceptance checks and prints one PASS/FAIL line each.
// Exit status is non-zero if any check fails or exceeds its time budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "blecert/certificate.hpp"
#include "blecert/energy.hpp"
#include "blecert/key_update.hpp"
#include "blecert/sim.hpp"
#include "support.hpp"

namespace {

using namespace blecert;
using pairing::Mode;
using pairing::Opcode;
using pairing::Role;
using pairing::State;

struct Verdict {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Verdict()> check;
};

// -- 1 ----------------------------------------------------------------------

Verdict certificate_size() {
  Verdict v;
  testing_support::IssuerFixture fx(1);
  const auto creds = fx.issue(testing_support::serial_of(1));
  v.require(creds.certificate.encode().size() == 103, "encoded size != 103");
  const CertSizeReport r = size_report();
  v.require(r.ble_total == 103, "profiled total != 103");
  v.require(r.x509_total == 1518, "X.509 total != 1518");
  char pct[16];
  std::snprintf(pct, sizeof(pct), "%.1f", r.reduction_percent);
  v.require(std::string(pct) == "93.2", std::string("reduction ") + pct);
  v.require(std::lround(r.reduction_percent) == 93, "reduction not ~93%");
  if (v.ok) v.detail = "103 vs 1518 bytes, " + std::string(pct) + "% smaller";
  return v;
}

// -- 2 ----------------------------------------------------------------------

Verdict cmac_fidelity() {
  Verdict v;
  const auto key = blecert::octets_from_hex<16>("2b7e151628aed2a6abf7158809cf4f3c");
  const Bytes msg = from_hex(
      "6bc1bee22e409f96e93d7e117393172aae2d8a571e03ac9c9eb76fac45af8e51"
      "30c81c46a35ce411e5fbc1191a0a52eff69f2445df4f9b17ad2b417be66c3710");
  const std::pair<std::size_t, const char*> vectors[] = {
      {0, "bb1d6929e95937287fa37d129b756746"},
      {16, "070a16b46b4d4144f79bdd9dd04a287c"},
      {40, "dfa66747de9ae63030ca32611497c827"},
      {64, "51f0bebf7e3b9d92fc49741779363cfe"}};
  for (const auto& [len, expected] : vectors) {
    const ByteView m(msg.data(), len);
    const auto mac = crypto::aes_cmac(key, m);
    v.require(to_hex(mac) == expected, "vector length " + std::to_string(len));
    v.require(mac == oracle::cmac(key, m),
              "oracle disagrees at length " + std::to_string(len));
  }
  if (v.ok) v.detail = "4/4 vectors, oracle agrees";
  return v;
}

// -- 3 ----------------------------------------------------------------------

std::optional<Bytes> delivered_payload(const sim::ScenarioRun& run, Opcode op) {
  for (const auto& e : run.transcript) {
    if (!e.dropped && !e.delivered.empty() &&
        e.delivered[0] == static_cast<std::uint8_t>(op)) {
      return Bytes(e.delivered.begin() + 1, e.delivered.end());
    }
  }
  return std::nullopt;
}

Verdict key_agreement() {
  Verdict v;
  for (std::uint64_t seed = 0; seed < 100 && v.ok; ++seed) {
    const auto run = sim::simulate(sim::Strategy::Passive, seed, Mode::Certificate);
    const std::string at = "seed " + std::to_string(seed);
    v.require(run.report.central_state == State::Established &&
                  run.report.peripheral_state == State::Established,
              at + ": not Established");
    if (!v.ok) break;
    v.require(*run.central_ltk == *run.peripheral_ltk, at + ": LTK mismatch");

    const sim::World world = sim::provision(seed);
    const auto& pk = world.peripheral.keys.public_key;
    const auto z = oracle::multiply(
        oracle::from_bytes(world.central.keys.private_key.bytes()),
        oracle::Point{oracle::from_bytes(pk.x()), oracle::from_bytes(pk.y())});
    crypto::SharedSecret secret{oracle::to_bytes32(z->x)};
    crypto::Nonce128 n_c;
    crypto::Nonce128 n_p;
    const auto pc = delivered_payload(run, Opcode::NonceCentral);
    const auto pp = delivered_payload(run, Opcode::NoncePeripheral);
    v.require(pc && pp, at + ": nonces missing from transcript");
    if (!v.ok) break;
    std::copy(pc->begin(), pc->end(), n_c.value.begin());
    std::copy(pp->begin(), pp->end(), n_p.value.begin());
    const auto expected = testing_support::oracle_ltk(
        secret, n_c, n_p, world.central_address, world.peripheral_address);
    v.require(run.central_ltk->bytes() == expected,
              at + ": LTK differs from CMAC composition");
  }
  if (v.ok) v.detail = "100/100 established, LTKs equal and match composition";
  return v;
}

// -- 4, 5 -------------------------------------------------------------------

Verdict sweep(const std::vector<std::tuple<sim::Strategy, Mode, sim::Outcome,
                                           const char*>>& arms) {
  Verdict v;
  std::string summary;
  for (const auto& [strategy, mode, outcome, reason] : arms) {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto r = sim::simulate(strategy, seed, mode).report;
      bool hit = r.outcome == outcome;
      if (reason != nullptr) hit = hit && r.abort_reason == std::string(reason);
      hits += hit ? 1 : 0;
    }
    const std::string label = std::string(sim::to_string(strategy)) +
                              (mode == Mode::Certificate ? "" : "/baseline");
    v.require(hits == 100, label + " " + std::to_string(hits) + "/100");
    if (!summary.empty()) summary += ", ";
    summary += label + " " + std::to_string(hits) + "/100";
  }
  if (v.ok) v.detail = summary;
  return v;
}

Verdict mitm_detection() {
  return sweep({{sim::Strategy::CertSubstitute, Mode::Certificate,
                 sim::Outcome::AbortedWithReason, "InvalidCertificate"},
                {sim::Strategy::KeySubstitute, Mode::Certificate,
                 sim::Outcome::AbortedWithReason, "InvalidCertificate"},
                {sim::Strategy::KeySubstitute, Mode::JustWorksBaseline,
                 sim::Outcome::CompromiseDetectedByHarness, nullptr}});
}

Verdict confirm_soundness() {
  return sweep({{sim::Strategy::NonceTamper, Mode::Certificate,
                 sim::Outcome::AbortedWithReason, "ConfirmMismatch"},
                {sim::Strategy::ConfirmTamper, Mode::Certificate,
                 sim::Outcome::AbortedWithReason, "ConfirmMismatch"}});
}

// -- 6 ----------------------------------------------------------------------

Verdict energy_model() {
  Verdict v;
  const energy::CryptoCostTable table;
  v.require(energy::pairing_overhead(table, 0, 1, 0) == 35.09, "verify != 35.09 mJ");
  v.require(energy::pairing_overhead(table, 1, 0, 0) == 11.86, "sign != 11.86 mJ");

  energy::EnergyParams unit;
  unit.tx_uj_per_byte = 1.0;
  unit.rx_uj_per_byte = 1.0;
  v.require(energy::tx_energy(unit, 103, 1) == 131.0, "E_T fixture != 131");
  v.require(energy::rx_energy(unit, 103, 1) == 131.0, "E_R fixture != 131");

  const energy::EnergyParams p{12.0, 0.31, 0.27, 0.7, 2.2, 14, 251};
  // 12 + 98*0.27 + 13*0.7 + 1616*0.31 + 2.2 and the mirrored sum.
  const double hand_t = 12.0 + 26.46 + 9.1 + 500.96 + 2.2;
  const double hand_r = 12.0 + 436.32 + 9.1 + 30.38 + 2.2;
  auto close = [](double a, double b) {
    return std::fabs(a - b) <= 8 * std::numeric_limits<double>::epsilon() *
                                   std::fmax(std::fabs(a), std::fabs(b));
  };
  v.require(close(energy::tx_energy(p, 1518, 7), hand_t), "E_T 7-fragment fixture");
  v.require(close(energy::rx_energy(p, 1518, 7), hand_r), "E_R 7-fragment fixture");
  if (v.ok) v.detail = "35.09 / 11.86 mJ exact, E_T/E_R fixtures agree";
  return v;
}

// -- 7 ----------------------------------------------------------------------

bool pairs(sim::World& world, const update::Credentials& peripheral,
           const BleCertificate& expect_cert) {
  world.peripheral = peripheral;
  pairing::PairingContext c(sim::endpoint_config(world, Role::Central, Mode::Certificate));
  pairing::PairingContext p(
      sim::endpoint_config(world, Role::Peripheral, Mode::Certificate));
  SeededRandom rc(1);
  SeededRandom rp(2);
  testing_support::drive(c, p, rc, rp);
  return c.state() == State::Established && p.state() == State::Established &&
         c.ltk() == p.ltk() && c.peer_certificate() == expect_cert;
}

Verdict key_rotation() {
  Verdict v;
  constexpr std::uint64_t kNow = 1'700'000'000;
  sim::World world = sim::provision(42);
  SeededRandom rng(43);
  const Serial serial = world.peripheral.certificate.serial;
  const auto secret = world.manufacturer.enroll_device(serial, rng);

  auto make_package = [&](std::uint64_t ts) {
    crypto::KeyPair fresh = crypto::generate_keypair(rng);
    const BleCertificate cert = world.authority.reissue(
        world.manufacturer.request_for(serial, fresh.public_key));
    return update::build_update(world.manufacturer, serial, fresh, cert, ts, rng);
  };

  {
    update::DeviceKeystore ks(secret, world.peripheral);
    const auto pkg = make_package(kNow);
    const auto out = update::apply_update(ks, pkg, kNow);
    v.require(out.applied, "fresh package not applied");
    v.require(ks.credentials().certificate == pkg.certificate, "keystore not rotated");
    v.require(pairs(world, ks.credentials(), pkg.certificate),
              "pairing after rotation failed");
  }
  {
    update::DeviceKeystore ks(secret, world.peripheral);
    const auto old = ks.credentials();
    const auto pkg = make_package(kNow - update::kDefaultFreshnessWindow - 1);
    const auto out = update::apply_update(ks, pkg, kNow);
    v.require(!out.applied && out.reason == update::DisconnectReason::StaleTimestamp,
              "aged package not rejected as StaleTimestamp");
    v.require(ks.credentials().certificate == old.certificate &&
                  ks.credentials().keys.private_key == old.keys.private_key,
              "keystore changed after rejection");
    v.require(pairs(world, ks.credentials(), old.certificate),
              "old certificate no longer pairs");
  }
  if (v.ok) v.detail = "rotated and paired; stale package Disconnected(StaleTimestamp)";
  return v;
}

// -- 8 ----------------------------------------------------------------------

Verdict tamper_exhaustiveness() {
  Verdict v;
  testing_support::IssuerFixture fx(8);
  const auto cert = fx.issue(testing_support::serial_of(8)).certificate;
  const auto& root = fx.authority.public_key();
  v.require(verify_cert(cert, root) == CertVerdict::Accept, "fixture does not verify");
  const auto raw = cert.encode();
  int rejected = 0;
  for (std::size_t bit = 0; bit < raw.size() * 8; ++bit) {
    auto flipped = raw;
    flipped[bit / 8] ^= static_cast<std::uint8_t>(0x80U >> (bit % 8));
    try {
      if (verify_cert(BleCertificate::decode(flipped), root) != CertVerdict::Accept) {
        ++rejected;
      }
    } catch (const Error&) {
      ++rejected;
    }
  }
  v.require(rejected == 824, std::to_string(rejected) + "/824 rejected");
  if (v.ok) v.detail = "824/824 single-bit flips rejected";
  return v;
}

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "certificate size", 1.0, certificate_size},
      {2, "CMAC fidelity", 1.0, cmac_fidelity},
      {3, "key agreement", 10.0, key_agreement},
      {4, "MITM detection", 30.0, mitm_detection},
      {5, "confirm soundness", 10.0, confirm_soundness},
      {6, "energy model", 1.0, energy_model},
      {7, "key rotation", 5.0, key_rotation},
      {8, "tamper exhaustiveness", 30.0, tamper_exhaustiveness},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    if (v.ok && secs > c.budget_seconds) {
      v.ok = false;
      v.detail += " (over time budget)";
    }
    failures += v.ok ? 0 : 1;
    std::printf("%s  %d %-22s %7.3fs / %4.0fs  %s\n", v.ok ? "PASS" : "FAIL",
                c.id, c.name, secs, c.budget_seconds, v.detail.c_str());
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
