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

#include "blecert/crypto.hpp"
#include "ossl.hpp"

namespace blecert::crypto {

namespace {

constexpr std::size_t kCounterSize = 8;
constexpr std::size_t kTagSize = 16;

// 12-byte GCM IV: direction octet, three zero octets, 8-byte counter.
Octets<12> make_iv(LinkDirection direction, std::uint64_t counter) {
  Octets<12> iv{};
  iv[0] = static_cast<std::uint8_t>(direction);
  for (std::size_t i = 0; i < kCounterSize; ++i) {
    iv[4 + i] = static_cast<std::uint8_t>(counter >> (56 - 8 * i));
  }
  return iv;
}

ossl::CipherCtxPtr gcm_context(const Ltk& ltk, const Octets<12>& iv,
                               bool encrypt) {
  ossl::CipherCtxPtr ctx(EVP_CIPHER_CTX_new());
  if (!ctx) ossl::fail("EVP_CIPHER_CTX_new");
  ossl::check(EVP_CipherInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr,
                                ltk.bytes().data(), iv.data(), encrypt ? 1 : 0),
              "EVP_CipherInit_ex");
  return ctx;
}

}  // namespace

Bytes session_seal(const Ltk& ltk, LinkDirection direction,
                   std::uint64_t counter, ByteView plaintext) {
  const auto iv = make_iv(direction, counter);
  auto ctx = gcm_context(ltk, iv, true);

  Bytes frame(kCounterSize + plaintext.size() + kTagSize);
  std::copy(iv.begin() + 4, iv.end(), frame.begin());
  int len = 0;
  // The counter prefix is authenticated as associated data.
  ossl::check(EVP_EncryptUpdate(ctx.get(), nullptr, &len, frame.data(),
                                kCounterSize),
              "EVP_EncryptUpdate(aad)");
  if (!plaintext.empty()) {
    ossl::check(EVP_EncryptUpdate(ctx.get(), frame.data() + kCounterSize, &len,
                                  plaintext.data(),
                                  static_cast<int>(plaintext.size())),
                "EVP_EncryptUpdate");
  }
  ossl::check(EVP_EncryptFinal_ex(ctx.get(), nullptr, &len),
              "EVP_EncryptFinal_ex");
  ossl::check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kTagSize,
                                  frame.data() + kCounterSize + plaintext.size()),
              "EVP_CTRL_GCM_GET_TAG");
  return frame;
}

OpenedFrame session_open(const Ltk& ltk, LinkDirection direction,
                         ByteView frame) {
  if (frame.size() < kCounterSize + kTagSize) {
    throw Error(Errc::AuthFailure, "frame too short");
  }
  std::uint64_t counter = 0;
  for (std::size_t i = 0; i < kCounterSize; ++i) {
    counter = (counter << 8) | frame[i];
  }
  const auto iv = make_iv(direction, counter);
  auto ctx = gcm_context(ltk, iv, false);

  const std::size_t body = frame.size() - kCounterSize - kTagSize;
  OpenedFrame out{counter, Bytes(body)};
  int len = 0;
  ossl::check(EVP_DecryptUpdate(ctx.get(), nullptr, &len, frame.data(),
                                kCounterSize),
              "EVP_DecryptUpdate(aad)");
  if (body > 0) {
    ossl::check(EVP_DecryptUpdate(ctx.get(), out.plaintext.data(), &len,
                                  frame.data() + kCounterSize,
                                  static_cast<int>(body)),
                "EVP_DecryptUpdate");
  }
  Octets<kTagSize> tag{};
  std::copy_n(frame.end() - kTagSize, kTagSize, tag.begin());
  ossl::check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kTagSize,
                                  tag.data()),
              "EVP_CTRL_GCM_SET_TAG");
  if (EVP_DecryptFinal_ex(ctx.get(), nullptr, &len) != 1) {
    secure_wipe(out.plaintext);
    throw Error(Errc::AuthFailure, "session frame failed authentication");
  }
  return out;
}

SessionChannel::SessionChannel(const Ltk& ltk, LinkDirection outbound)
    : ltk_(ltk),
      outbound_(outbound),
      inbound_(outbound == LinkDirection::CentralToPeripheral
                   ? LinkDirection::PeripheralToCentral
                   : LinkDirection::CentralToPeripheral) {}

Bytes SessionChannel::seal(ByteView plaintext) {
  return session_seal(ltk_, outbound_, next_send_++, plaintext);
}

Bytes SessionChannel::open(ByteView frame) {
  OpenedFrame opened = session_open(ltk_, inbound_, frame);
  if (opened.counter <= last_received_) {
    throw Error(Errc::ReplayDetected);
  }
  last_received_ = opened.counter;
  return std::move(opened.plaintext);
}

}  // namespace blecert::crypto
