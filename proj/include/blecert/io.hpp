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

#include <filesystem>
#include <string>

#include "blecert/crypto.hpp"

// Key files: a private scalar is 64 hex characters on one line; a public key
// is its 64-hex-character x-coordinate (the even-y point is implied).
namespace blecert::io {

Bytes read_file(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
void append_line(const std::filesystem::path& path, const std::string& line);

crypto::PrivateScalar load_private_key(const std::filesystem::path& path);
void save_private_key(const std::filesystem::path& path,
                      const crypto::PrivateScalar& key);

crypto::PublicKey load_public_key(const std::filesystem::path& path);
void save_public_key(const std::filesystem::path& path,
                     const crypto::PublicKey& key);

std::string public_key_hex(const crypto::PublicKey& key);
crypto::PublicKey public_key_from_hex(std::string_view hex);

}  // namespace blecert::io
