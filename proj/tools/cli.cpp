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

#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "blecert/authority.hpp"
#include "blecert/certificate.hpp"
#include "blecert/energy.hpp"
#include "blecert/io.hpp"
#include "blecert/json.hpp"
#include "blecert/key_update.hpp"
#include "blecert/sim.hpp"

namespace blecert::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kHomeEnv = "BLE_CERTAUTH_HOME";
constexpr const char* kDefaultHome = ".blecert";

// Provisioning state kept under the home directory.
struct Home {
  fs::path dir;

  fs::path root_key() const { return dir / "root.key"; }
  fs::path root_pub() const { return dir / "root.pub"; }
  fs::path manufacturers() const { return dir / "manufacturers.txt"; }
  fs::path registry() const { return dir / "registry.txt"; }
  fs::path manufacturer_key() const { return dir / "manufacturer.key"; }
  fs::path devices() const { return dir / "devices"; }
  fs::path keystore(const Serial& s) const {
    return devices() / (to_hex(s) + ".keystore");
  }
  fs::path device_secret(const Serial& s) const {
    return devices() / (to_hex(s) + ".secret");
  }
};

Home resolve_home(const std::string& flag) {
  if (const char* env = std::getenv(kHomeEnv); env != nullptr && *env != '\0') {
    return Home{env};
  }
  return Home{flag.empty() ? fs::path(kDefaultHome) : fs::path(flag)};
}

std::vector<std::string> lines_of(const fs::path& path) {
  std::vector<std::string> out;
  if (!fs::exists(path)) return out;
  std::istringstream in(io::read_text(path));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

RootAuthority load_authority(const Home& home) {
  if (!fs::exists(home.root_key())) {
    throw Error(Errc::Io, "no authority at " + home.dir.string() +
                              " (run `bleca init` first)");
  }
  std::vector<crypto::PublicKey> manufacturers;
  for (const auto& line : lines_of(home.manufacturers())) {
    manufacturers.push_back(io::public_key_from_hex(line));
  }
  // Append-only; a later line for a serial supersedes earlier ones.
  std::vector<BleCertificate> registry;
  for (const auto& line : lines_of(home.registry())) {
    const auto space = line.find(' ');
    if (space == std::string::npos) {
      throw Error(Errc::Io, "malformed registry line");
    }
    registry.push_back(BleCertificate::decode(from_hex(line.substr(space + 1))));
  }
  return RootAuthority::restore(io::load_private_key(home.root_key()),
                                manufacturers, registry);
}

void record_certificate(const Home& home, const BleCertificate& cert) {
  io::append_line(home.registry(),
                  to_hex(cert.serial) + " " + armor_certificate(cert));
}

std::unique_ptr<RandomSource> make_rng(const CLI::Option* seed_option,
                                       std::uint64_t seed) {
  if (seed_option != nullptr && seed_option->count() > 0) {
    return std::make_unique<SeededRandom>(seed);
  }
  return std::make_unique<SystemRandom>();
}

Serial parse_mac(const std::string& text) {
  return crypto::DeviceAddress::parse(text).addr;
}

struct KeystoreFile {
  static update::DeviceKeystore load(const fs::path& path) {
    std::map<std::string, std::string> kv;
    for (const auto& line : lines_of(path)) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    if (!kv.contains("manufacturing_secret") || !kv.contains("private_key") ||
        !kv.contains("certificate")) {
      throw Error(Errc::Io, "incomplete keystore " + path.string());
    }
    auto scalar = crypto::PrivateScalar::from_hex(kv["private_key"]);
    auto pub = crypto::derive_public_key(scalar);
    return update::DeviceKeystore(
        octets_from_hex<16>(kv["manufacturing_secret"]),
        update::Credentials{crypto::KeyPair{std::move(scalar), pub},
                            BleCertificate::decode(from_hex(kv["certificate"]))});
  }

  static void save(const fs::path& path, const update::DeviceKeystore& store) {
    const auto creds = store.credentials();
    std::string text = "manufacturing_secret=" +
                       to_hex(store.manufacturing_secret()) + "\n" +
                       "private_key=" + to_hex(creds.keys.private_key.bytes()) +
                       "\n" + "certificate=" +
                       armor_certificate(creds.certificate) + "\n";
    io::write_text(path, text);
    fs::permissions(path, fs::perms::owner_read | fs::perms::owner_write);
    secure_wipe(std::span(reinterpret_cast<std::uint8_t*>(text.data()),
                          text.size()));
  }
};

std::string frame_label(const Bytes& frame) {
  if (frame.empty()) return "-";
  try {
    return pairing::to_string(pairing::WireMessage::decode(frame).opcode);
  } catch (const Error&) {
    return "MALFORMED";
  }
}

ordered_json transcript_json(const std::vector<sim::TranscriptEntry>& entries) {
  ordered_json out = ordered_json::array();
  for (const auto& e : entries) {
    ordered_json item = {
        {"index", e.index},
        {"direction", sim::to_string(e.direction)},
        {"message", frame_label(e.dropped ? e.original : e.delivered)},
        {"bytes", to_hex(e.dropped ? e.original : e.delivered)},
        {"modified", e.modified},
        {"injected", e.injected},
        {"dropped", e.dropped},
        {"receiver_state", e.receiver_state},
    };
    if (e.modified) item["original_bytes"] = to_hex(e.original);
    out.push_back(std::move(item));
  }
  return out;
}

void print_transcript(std::ostream& out,
                      const std::vector<sim::TranscriptEntry>& entries) {
  for (const auto& e : entries) {
    std::string flags;
    if (e.modified) flags += " [modified]";
    if (e.injected) flags += " [injected]";
    if (e.dropped) flags += " [dropped]";
    const Bytes& shown = e.dropped ? e.original : e.delivered;
    out << "#" << e.index << "  " << sim::to_string(e.direction) << "  "
        << frame_label(shown) << " (" << shown.size() << " B)" << flags;
    if (!e.receiver_state.empty()) out << "  -> " << e.receiver_state;
    out << "\n    " << to_hex(shown) << "\n";
  }
}

std::string report_line(const sim::ScenarioReport& r) {
  std::string line = r.scenario + " seed=" + std::to_string(r.seed) + " " +
                     sim::to_string(r.outcome);
  if (r.abort_reason) line += "(" + *r.abort_reason + ")";
  line += " frames=" + std::to_string(r.frames_exchanged);
  line += " central=" + std::string(pairing::to_string(r.central_state));
  line += " peripheral=" + std::string(pairing::to_string(r.peripheral_state));
  return line;
}

// -- subcommand handlers ----------------------------------------------------

int cmd_bleca_init(const Home& home, RandomSource& rng, std::ostream& out) {
  if (fs::exists(home.root_key())) {
    throw Error(Errc::Io, "authority already initialized at " +
                              home.dir.string());
  }
  fs::create_directories(home.dir);
  RootAuthority authority = RootAuthority::init(rng);
  io::save_private_key(home.root_key(), authority.private_key());
  io::save_public_key(home.root_pub(), authority.public_key());
  io::write_text(home.manufacturers(), "");
  io::write_text(home.registry(), "");
  out << "root-public-key " << io::public_key_hex(authority.public_key())
      << "\n";
  return kExitOk;
}

int cmd_bleca_register(const Home& home, const std::string& key_file,
                       std::ostream& out) {
  RootAuthority authority = load_authority(home);
  const crypto::PublicKey key = io::load_public_key(key_file);
  const RegistrationId id = authority.register_manufacturer(key);
  io::append_line(home.manufacturers(), io::public_key_hex(key));
  out << "registration-id " << id << "\n";
  return kExitOk;
}

int cmd_bleca_issue(const Home& home, const std::string& mac,
                    const std::string& subject_file, const std::string& sig_file,
                    const std::string& out_file, std::ostream& out) {
  RootAuthority authority = load_authority(home);
  IssuanceRequest request;
  request.serial = parse_mac(mac);
  request.subject_public_key = octets_from_hex<crypto::kCoordinateSize>(
      io::read_text(subject_file));
  request.manufacturer_signature =
      crypto::Signature::decode(from_hex(io::read_text(sig_file)));
  const BleCertificate cert = authority.issue(request);
  record_certificate(home, cert);
  if (!out_file.empty()) io::write_text(out_file, armor_certificate(cert) + "\n");
  out << armor_certificate(cert) << "\n";
  return kExitOk;
}

int cmd_bleca_lookup(const Home& home, const std::string& mac,
                     std::ostream& out, std::ostream& err) {
  const RootAuthority authority = load_authority(home);
  if (auto cert = authority.lookup(parse_mac(mac))) {
    out << armor_certificate(*cert) << "\n";
    return kExitOk;
  }
  err << "absent: no certificate for " << mac << "\n";
  return kExitFailure;
}

int cmd_keygen(const std::string& prefix, RandomSource& rng, std::ostream& out) {
  const crypto::KeyPair keys = crypto::generate_keypair(rng);
  io::save_private_key(prefix + ".key", keys.private_key);
  io::save_public_key(prefix + ".pub", keys.public_key);
  out << "public-key " << io::public_key_hex(keys.public_key) << "\n";
  return kExitOk;
}

int cmd_request_sign(const std::string& manufacturer_key,
                     const std::string& mac, const std::string& subject_file,
                     const std::string& out_file, std::ostream& out) {
  const auto request = IssuanceRequest::create(
      parse_mac(mac),
      octets_from_hex<crypto::kCoordinateSize>(io::read_text(subject_file)),
      io::load_private_key(manufacturer_key));
  const std::string sig = to_hex(request.manufacturer_signature.encode());
  io::write_text(out_file, sig + "\n");
  out << "request-signature " << sig << "\n";
  return kExitOk;
}

int cmd_certinfo(const std::string& file, const std::string& root_file,
                 bool json, std::ostream& out) {
  const BleCertificate cert = parse_certificate_file(io::read_file(file));
  std::optional<CertVerdict> verdict;
  if (!root_file.empty()) {
    verdict = verify_cert(cert, io::load_public_key(root_file));
  }
  if (json) {
    ordered_json doc = to_json(cert);
    doc["encoded_size"] = kCertificateSize;
    doc["verification"] = verdict ? ordered_json(to_string(*verdict))
                                  : ordered_json(nullptr);
    out << doc.dump(2) << "\n";
  } else {
    out << "version             " << int{cert.version} << "\n"
        << "serial              " << cert.subject_address().to_string() << "\n"
        << "subject public key  " << to_hex(cert.subject_public_key) << "\n"
        << "signature r         " << to_hex(cert.signature.r) << "\n"
        << "signature s         " << to_hex(cert.signature.s) << "\n"
        << "encoded size        " << kCertificateSize << " bytes\n"
        << "verification        "
        << (verdict ? to_string(*verdict) : "not checked (no --root)") << "\n";
  }
  if (verdict && *verdict != CertVerdict::Accept) return kExitFailure;
  return kExitOk;
}

int cmd_size_report(bool json, std::ostream& out) {
  const CertSizeReport report = size_report();
  if (json) {
    out << to_json(report).dump(2) << "\n";
  } else {
    out << render_text(report);
  }
  return kExitOk;
}

int cmd_pair_demo(std::uint64_t seed, bool reveal_keys, bool json,
                  std::ostream& out) {
  const sim::World world = sim::provision(seed);
  const sim::ScenarioRun run =
      sim::simulate(sim::Strategy::Passive, seed, pairing::Mode::Certificate);
  const auto& r = run.report;

  auto ltk_text = [&](const std::optional<crypto::Ltk>& ltk) -> std::string {
    if (!ltk) return "none";
    return reveal_keys ? to_hex(ltk->bytes()) : "<redacted>";
  };

  if (json) {
    ordered_json doc = {
        {"seed", seed},
        {"root_public_key", io::public_key_hex(world.authority.public_key())},
        {"central",
         {{"address", world.central_address.to_string()},
          {"certificate", armor_certificate(world.central.certificate)}}},
        {"peripheral",
         {{"address", world.peripheral_address.to_string()},
          {"certificate", armor_certificate(world.peripheral.certificate)}}},
        {"transcript", transcript_json(run.transcript)},
        {"central_state", pairing::to_string(r.central_state)},
        {"peripheral_state", pairing::to_string(r.peripheral_state)},
        {"ltk_match", r.ltk_match ? ordered_json(*r.ltk_match)
                                  : ordered_json(nullptr)},
        {"central_ltk", ltk_text(run.central_ltk)},
        {"peripheral_ltk", ltk_text(run.peripheral_ltk)},
    };
    out << doc.dump(2) << "\n";
  } else {
    out << "pair-demo seed " << seed << "\n"
        << "root public key  " << io::public_key_hex(world.authority.public_key())
        << "\n"
        << "central          " << world.central_address.to_string() << "\n"
        << "peripheral       " << world.peripheral_address.to_string() << "\n\n";
    print_transcript(out, run.transcript);
    out << "\ncentral     " << pairing::to_string(r.central_state) << "\n"
        << "peripheral  " << pairing::to_string(r.peripheral_state) << "\n"
        << "LTK match   "
        << (r.ltk_match ? (*r.ltk_match ? "yes" : "no") : "n/a") << "\n"
        << "central LTK      " << ltk_text(run.central_ltk) << "\n"
        << "peripheral LTK   " << ltk_text(run.peripheral_ltk) << "\n";
  }
  return r.central_state == pairing::State::Established ? kExitOk : kExitFailure;
}

int cmd_attack_demo(sim::Strategy strategy, bool baseline, std::uint64_t seed,
                    int trials, bool json, std::ostream& out) {
  const pairing::Mode mode =
      baseline ? pairing::Mode::JustWorksBaseline : pairing::Mode::Certificate;
  ordered_json reports = ordered_json::array();
  for (int i = 0; i < trials; ++i) {
    const std::uint64_t trial_seed = seed + static_cast<std::uint64_t>(i);
    const sim::ScenarioRun run = sim::simulate(strategy, trial_seed, mode);
    if (json) {
      reports.push_back(to_json(run.report));
      continue;
    }
    if (trials == 1) {
      print_transcript(out, run.transcript);
      for (const auto& note : run.report.notes) out << "note: " << note << "\n";
    }
    out << report_line(run.report) << "\n";
  }
  if (json) out << reports.dump(2) << "\n";
  return kExitOk;
}

int cmd_provision(const Home& home, const std::string& mac, RandomSource& rng,
                  std::ostream& out) {
  RootAuthority authority = load_authority(home);
  const Serial serial = parse_mac(mac);

  std::optional<update::Manufacturer> manufacturer;
  if (fs::exists(home.manufacturer_key())) {
    auto key = io::load_private_key(home.manufacturer_key());
    auto pub = crypto::derive_public_key(key);
    manufacturer.emplace(crypto::KeyPair{std::move(key), pub});
  } else {
    manufacturer.emplace(update::Manufacturer::create(rng));
    authority.register_manufacturer(manufacturer->public_key());
    io::save_private_key(home.manufacturer_key(), manufacturer->private_key());
    io::append_line(home.manufacturers(),
                    io::public_key_hex(manufacturer->public_key()));
  }

  crypto::KeyPair keys = crypto::generate_keypair(rng);
  const BleCertificate cert =
      authority.issue(manufacturer->request_for(serial, keys.public_key));
  record_certificate(home, cert);

  const auto secret = manufacturer->enroll_device(serial, rng);
  fs::create_directories(home.devices());
  io::write_text(home.device_secret(serial), to_hex(secret) + "\n");
  fs::permissions(home.device_secret(serial),
                  fs::perms::owner_read | fs::perms::owner_write);
  KeystoreFile::save(home.keystore(serial),
                     update::DeviceKeystore(secret, {std::move(keys), cert}));
  out << armor_certificate(cert) << "\n";
  return kExitOk;
}

int cmd_key_update_build(const Home& home, const std::string& mac,
                         std::uint64_t now, const std::string& out_file,
                         RandomSource& rng, std::ostream& out) {
  RootAuthority authority = load_authority(home);
  const Serial serial = parse_mac(mac);
  if (!fs::exists(home.device_secret(serial))) {
    throw Error(Errc::UnknownDevice, "device " + mac + " was not provisioned");
  }
  auto key = io::load_private_key(home.manufacturer_key());
  auto pub = crypto::derive_public_key(key);
  update::Manufacturer manufacturer(crypto::KeyPair{std::move(key), pub});
  manufacturer.enroll_device(
      serial, octets_from_hex<16>(io::read_text(home.device_secret(serial))));

  const crypto::KeyPair fresh = crypto::generate_keypair(rng);
  const BleCertificate cert =
      authority.reissue(manufacturer.request_for(serial, fresh.public_key));
  record_certificate(home, cert);
  const update::UpdatePackage pkg =
      update::build_update(manufacturer, serial, fresh, cert, now, rng);
  io::write_text(out_file, to_hex(pkg.encode()) + "\n");
  out << "package " << out_file << " (" << update::kPackageSize
      << " bytes) timestamp " << now << "\n";
  return kExitOk;
}

int cmd_key_update_apply(const Home& home, const std::string& mac,
                         const std::string& package_file, std::uint64_t now,
                         std::uint64_t window, std::ostream& out,
                         std::ostream& err) {
  const Serial serial = parse_mac(mac);
  update::DeviceKeystore keystore = KeystoreFile::load(home.keystore(serial));
  const auto pkg =
      update::UpdatePackage::decode(from_hex(io::read_text(package_file)));
  const auto outcome = update::apply_update(keystore, pkg, now, window);
  if (!outcome.applied) {
    err << "Disconnected: " << update::to_string(*outcome.reason) << "\n";
    return kExitFailure;
  }
  KeystoreFile::save(home.keystore(serial), keystore);
  out << "Applied: new certificate "
      << armor_certificate(keystore.credentials().certificate) << "\n";
  return kExitOk;
}

int cmd_energy(const std::string& params_file, double cert_size, bool full,
               bool json, std::ostream& out) {
  const energy::EnergyParams params =
      energy::parse_params(io::read_text(params_file));
  const energy::CryptoCostTable table;
  const auto cert = energy::cert_transfer_energy(params, cert_size);
  const auto x509 = energy::cert_transfer_energy(
      params, static_cast<double>(size_report().x509_total));
  const double verify_mj = energy::pairing_overhead(table, 0, 1, 0);
  const double sign_mj = energy::pairing_overhead(table, 1, 0, 0);
  const double handshake_mj = energy::pairing_overhead(table, 0, 1, 1);
  const double handshake_sign_mj = energy::pairing_overhead(table, 1, 1, 1);

  if (json) {
    ordered_json doc = {
        {"cert_size_bytes", cert_size},
        {"fragments", cert.fragments},
        {"tx_uj", cert.tx_uj},
        {"rx_uj", cert.rx_uj},
        {"x509_size_bytes", size_report().x509_total},
        {"x509_fragments", x509.fragments},
        {"x509_tx_uj", x509.tx_uj},
        {"x509_rx_uj", x509.rx_uj},
        {"verify_mj", verify_mj},
        {"sign_mj", sign_mj},
        {"handshake_mj", handshake_mj},
        {"handshake_with_sign_mj", handshake_sign_mj},
        {"crypto_costs", to_json(table)},
    };
    out << doc.dump(2) << "\n";
    return kExitOk;
  }
  char line[160];
  auto row = [&](const char* name, double value, const char* unit) {
    std::snprintf(line, sizeof(line), "%-38s %14.3f %s\n", name, value, unit);
    out << line;
  };
  out << "Certificate transfer (" << cert_size << " B, " << cert.fragments
      << " fragment(s))\n";
  row("  transmit E_T", cert.tx_uj, "uJ");
  row("  receive E_R", cert.rx_uj, "uJ");
  out << "X.509 transfer (" << size_report().x509_total << " B, "
      << x509.fragments << " fragment(s))\n";
  row("  transmit E_T", x509.tx_uj, "uJ");
  row("  receive E_R", x509.rx_uj, "uJ");
  if (!full) return kExitOk;
  out << "Cryptographic cost\n";
  row("  certificate verification", verify_mj, "mJ");
  row("  certificate signing", sign_mj, "mJ");
  row("  per endpoint (verify + ECDH)", handshake_mj, "mJ");
  row("  per endpoint (sign + verify + ECDH)", handshake_sign_mj, "mJ");
  out << "Cost table\n";
  for (const auto& [name, value] : table.as_reported()) {
    std::snprintf(line, sizeof(line), "  %-36s %14.3f\n", name.c_str(), value);
    out << line;
  }
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Certificate-authenticated BLE Just Works pairing toolkit",
               "blecert"};
  app.require_subcommand(1);
  std::string home_flag;
  app.add_option("--home", home_flag,
                 "State directory (overridden by BLE_CERTAUTH_HOME)");

  std::uint64_t seed = 0;
  auto add_seed = [&](CLI::App* sub) {
    return sub->add_option("--seed", seed, "Deterministic randomness seed");
  };

  // bleca
  auto* bleca = app.add_subcommand("bleca", "Certification authority");
  bleca->require_subcommand(1);
  auto* init = bleca->add_subcommand("init", "Create a root key");
  std::string init_out;
  init->add_option("--out", init_out, "Directory to initialize");
  CLI::Option* init_seed = add_seed(init);

  auto* reg = bleca->add_subcommand("register", "Register a manufacturer key");
  std::string manufacturer_key;
  reg->add_option("--manufacturer-key", manufacturer_key)->required();

  auto* issue = bleca->add_subcommand("issue", "Issue a device certificate");
  std::string mac, subject_key, request_sig, out_file;
  issue->add_option("--mac", mac)->required();
  issue->add_option("--subject-key", subject_key)->required();
  issue->add_option("--request-sig", request_sig)->required();
  issue->add_option("--out", out_file);

  auto* lookup = bleca->add_subcommand("lookup", "Find a device certificate");
  lookup->add_option("--mac", mac)->required();

  // helpers
  auto* keygen = app.add_subcommand("keygen", "Generate an even-y P-256 key");
  std::string prefix;
  keygen->add_option("--out", prefix, "Output prefix (.key/.pub)")->required();
  CLI::Option* keygen_seed = add_seed(keygen);

  auto* request_sign =
      app.add_subcommand("request-sign", "Countersign an issuance request");
  std::string manufacturer_priv;
  request_sign->add_option("--manufacturer-priv", manufacturer_priv)->required();
  request_sign->add_option("--mac", mac)->required();
  request_sign->add_option("--subject-key", subject_key)->required();
  request_sign->add_option("--out", out_file)->required();

  auto* provision =
      app.add_subcommand("provision", "Enroll a simulated device end to end");
  provision->add_option("--mac", mac)->required();
  CLI::Option* provision_seed = add_seed(provision);

  // certificates
  bool json = false;
  auto* certinfo = app.add_subcommand("certinfo", "Inspect a certificate file");
  std::string cert_file, root_file;
  certinfo->add_option("file", cert_file)->required();
  certinfo->add_option("--root", root_file, "Root public key to verify against");
  certinfo->add_flag("--json", json);

  auto* sizes = app.add_subcommand("size-report", "Certificate size comparison");
  sizes->add_flag("--json", json);

  // pairing and attacks
  auto* pair_demo = app.add_subcommand("pair-demo", "Run one honest handshake");
  bool reveal_keys = false;
  add_seed(pair_demo)->required();
  pair_demo->add_flag("--reveal-keys", reveal_keys);
  pair_demo->add_flag("--json", json);

  auto* attack = app.add_subcommand("attack-demo", "Run adversary scenarios");
  std::string strategy_name;
  bool baseline = false;
  int trials = 1;
  attack->add_option("--strategy", strategy_name)
      ->required()
      ->check(CLI::IsMember({"passive", "cert-sub", "key-sub", "nonce-tamper",
                             "confirm-tamper", "addr-spoof"}));
  attack->add_flag("--baseline", baseline,
                   "Attack unauthenticated Just Works instead");
  add_seed(attack);
  attack->add_option("--trials", trials)->check(CLI::PositiveNumber);
  attack->add_flag("--json", json);

  // key rotation
  auto* key_update = app.add_subcommand("key-update", "Device key rotation");
  key_update->require_subcommand(1);
  std::uint64_t now = 0;
  std::uint64_t window = update::kDefaultFreshnessWindow;
  std::string package_file;
  auto* build = key_update->add_subcommand("build", "Build an update package");
  build->add_option("--mac", mac)->required();
  build->add_option("--now", now)->required();
  build->add_option("--out", out_file)->required();
  build->add_option("--window", window);
  CLI::Option* build_seed = add_seed(build);
  auto* apply = key_update->add_subcommand("apply", "Apply an update package");
  apply->add_option("--mac", mac)->required();
  apply->add_option("--package", package_file)->required();
  apply->add_option("--now", now)->required();
  apply->add_option("--window", window);

  // energy
  auto* energy_cmd = app.add_subcommand("energy", "Energy model report");
  std::string params_file;
  double cert_size = static_cast<double>(kCertificateSize);
  bool report_flag = false;
  energy_cmd->add_option("--params", params_file)->required();
  energy_cmd->add_option("--cert-size", cert_size)->check(CLI::PositiveNumber);
  energy_cmd->add_flag("--report", report_flag,
                      "Include cryptographic costs");
  energy_cmd->add_flag("--json", json);

  std::vector<std::string> argv_storage{"blecert"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Home home = resolve_home(home_flag);
    if (*init) {
      if (!init_out.empty()) home = Home{init_out};
      return cmd_bleca_init(home, *make_rng(init_seed, seed), out);
    }
    if (*reg) return cmd_bleca_register(home, manufacturer_key, out);
    if (*issue) {
      return cmd_bleca_issue(home, mac, subject_key, request_sig, out_file, out);
    }
    if (*lookup) return cmd_bleca_lookup(home, mac, out, err);
    if (*keygen) return cmd_keygen(prefix, *make_rng(keygen_seed, seed), out);
    if (*request_sign) {
      return cmd_request_sign(manufacturer_priv, mac, subject_key, out_file, out);
    }
    if (*provision) {
      return cmd_provision(home, mac, *make_rng(provision_seed, seed), out);
    }
    if (*certinfo) return cmd_certinfo(cert_file, root_file, json, out);
    if (*sizes) return cmd_size_report(json, out);
    if (*pair_demo) return cmd_pair_demo(seed, reveal_keys, json, out);
    if (*attack) {
      return cmd_attack_demo(*sim::parse_strategy(strategy_name), baseline,
                             seed, trials, json, out);
    }
    if (*build) {
      return cmd_key_update_build(home, mac, now, out_file,
                                  *make_rng(build_seed, seed), out);
    }
    if (*apply) {
      return cmd_key_update_apply(home, mac, package_file, now, window, out,
                                  err);
    }
    if (*energy_cmd) {
      return cmd_energy(params_file, cert_size, report_flag, json, out);
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: Io: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace blecert::cli
