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

#include "blecert/io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

namespace blecert::io {

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in),
               std::istreambuf_iterator<char>());
}

std::string read_text(const std::filesystem::path& path) {
  const Bytes raw = read_file(path);
  return std::string(raw.begin(), raw.end());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) {
    throw Error(Errc::Io, "cannot write " + path.string());
  }
}

void append_line(const std::filesystem::path& path, const std::string& line) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out || !(out << line << '\n') || !out.flush()) {
    throw Error(Errc::Io, "cannot append to " + path.string());
  }
}

crypto::PrivateScalar load_private_key(const std::filesystem::path& path) {
  std::string text = read_text(path);
  crypto::PrivateScalar key = crypto::PrivateScalar::from_hex(text);
  secure_wipe(std::span(reinterpret_cast<std::uint8_t*>(text.data()),
                        text.size()));
  return key;
}

void save_private_key(const std::filesystem::path& path,
                      const crypto::PrivateScalar& key) {
  std::string text = to_hex(key.bytes()) + "\n";
  write_text(path, text);
  std::filesystem::permissions(path, std::filesystem::perms::owner_read |
                                         std::filesystem::perms::owner_write);
  secure_wipe(std::span(reinterpret_cast<std::uint8_t*>(text.data()),
                        text.size()));
}

std::string public_key_hex(const crypto::PublicKey& key) {
  return to_hex(key.x());
}

crypto::PublicKey public_key_from_hex(std::string_view hex) {
  return crypto::PublicKey::from_x(octets_from_hex<crypto::kCoordinateSize>(hex));
}

crypto::PublicKey load_public_key(const std::filesystem::path& path) {
  return public_key_from_hex(read_text(path));
}

void save_public_key(const std::filesystem::path& path,
                     const crypto::PublicKey& key) {
  write_text(path, public_key_hex(key) + "\n");
}

}  // namespace blecert::io
