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

#include <openssl/evp.h>

#include <algorithm>

#include "blecert/crypto.hpp"
#include "ossl.hpp"

namespace blecert::crypto {

namespace {

// Doubling in GF(2^128) as used for the CMAC subkeys.
Block shift_left_xor_rb(const Block& in) {
  Block out{};
  for (std::size_t i = 0; i < kBlockSize; ++i) {
    const std::uint8_t next = i + 1 < kBlockSize ? in[i + 1] : 0;
    out[i] = static_cast<std::uint8_t>((in[i] << 1) | (next >> 7));
  }
  if (in[0] & 0x80) out[kBlockSize - 1] ^= 0x87;
  return out;
}

void xor_into(Block& acc, const std::uint8_t* data) {
  for (std::size_t i = 0; i < kBlockSize; ++i) acc[i] ^= data[i];
}

class BlockCipher {
 public:
  explicit BlockCipher(const Block& key) : ctx_(EVP_CIPHER_CTX_new()) {
    if (!ctx_) ossl::fail("EVP_CIPHER_CTX_new");
    ossl::check(EVP_EncryptInit_ex(ctx_.get(), EVP_aes_128_ecb(), nullptr,
                                   key.data(), nullptr),
                "EVP_EncryptInit_ex");
    EVP_CIPHER_CTX_set_padding(ctx_.get(), 0);
  }

  Block encrypt(const Block& in) {
    Block out{};
    int len = 0;
    ossl::check(EVP_EncryptUpdate(ctx_.get(), out.data(), &len, in.data(),
                                  static_cast<int>(in.size())),
                "EVP_EncryptUpdate");
    if (len != static_cast<int>(kBlockSize)) ossl::fail("AES block length");
    return out;
  }

 private:
  ossl::CipherCtxPtr ctx_;
};

}  // namespace

Block aes128_encrypt_block(const Block& key, const Block& plaintext) {
  return BlockCipher(key).encrypt(plaintext);
}

Block aes_cmac(const Block& key, ByteView message) {
  BlockCipher cipher(key);
  const Block l = cipher.encrypt(Block{});
  const Block k1 = shift_left_xor_rb(l);
  const Block k2 = shift_left_xor_rb(k1);

  const std::size_t n = message.empty()
                            ? 1
                            : (message.size() + kBlockSize - 1) / kBlockSize;
  const bool complete_last = !message.empty() && message.size() % kBlockSize == 0;

  Block last{};
  const std::size_t tail_offset = (n - 1) * kBlockSize;
  const std::size_t tail_len = message.size() - tail_offset;
  std::copy_n(message.begin() + static_cast<std::ptrdiff_t>(tail_offset),
              tail_len, last.begin());
  if (complete_last) {
    xor_into(last, k1.data());
  } else {
    last[tail_len] = 0x80;
    xor_into(last, k2.data());
  }

  Block x{};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    xor_into(x, message.data() + i * kBlockSize);
    x = cipher.encrypt(x);
  }
  xor_into(x, last.data());
  return cipher.encrypt(x);
}

Octets<32> sha256(ByteView message) {
  Octets<32> out{};
  unsigned int len = 0;
  ossl::check(EVP_Digest(message.data(), message.size(), out.data(), &len,
                         EVP_sha256(), nullptr),
              "EVP_Digest");
  return out;
}

ConfirmValue f4_confirm(const PublicKey& pk_c, const PublicKey& pk_p,
                        const Nonce128& n_p) {
  Octets<2 * kCoordinateSize> message{};
  std::copy(pk_c.x().begin(), pk_c.x().end(), message.begin());
  std::copy(pk_p.x().begin(), pk_p.x().end(),
            message.begin() + kCoordinateSize);
  return ConfirmValue{aes_cmac(n_p.value, message)};
}

Block f5_intermediate_key(const SharedSecret& secret) {
  if (std::all_of(secret.value.begin(), secret.value.end(),
                  [](std::uint8_t b) { return b == 0; })) {
    throw Error(Errc::ZeroSecret);
  }
  return aes_cmac(kF5Salt, secret.value);
}

Ltk f5_ltk(const SharedSecret& secret, const Nonce128& n_c, const Nonce128& n_p,
           const DeviceAddress& mac_c, const DeviceAddress& mac_p) {
  Block t = f5_intermediate_key(secret);

  Bytes message;
  message.reserve(2 * kBlockSize + 2 * DeviceAddress::kEncodedSize);
  append(message, n_c.value);
  append(message, n_p.value);
  append(message, mac_c.encode());
  append(message, mac_p.encode());

  Ltk ltk(aes_cmac(t, message));
  secure_wipe(t);
  return ltk;
}

}  // namespace blecert::crypto
