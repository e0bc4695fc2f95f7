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

// RAII wrappers and helpers for the OpenSSL primitives used internally.

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/evp.h>

#include <memory>

#include "blecert/bytes.hpp"

namespace blecert::ossl {

struct BnDeleter {
  void operator()(BIGNUM* p) const { BN_clear_free(p); }
};
struct BnCtxDeleter {
  void operator()(BN_CTX* p) const { BN_CTX_free(p); }
};
struct PointDeleter {
  void operator()(EC_POINT* p) const { EC_POINT_clear_free(p); }
};
struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
};

using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;
using BnCtxPtr = std::unique_ptr<BN_CTX, BnCtxDeleter>;
using PointPtr = std::unique_ptr<EC_POINT, PointDeleter>;
using CipherCtxPtr = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

// Throws Error(Errc::Internal) with the OpenSSL error queue text.
[[noreturn]] void fail(const char* what);

inline void check(int rc, const char* what) {
  if (rc != 1) fail(what);
}

// The P-256 group, constructed once.
const EC_GROUP* p256();
const BIGNUM* p256_order();
const BIGNUM* p256_prime();

BnPtr new_bn();
BnCtxPtr new_ctx();
PointPtr new_point();

BnPtr bn_from(ByteView big_endian);
// Left-padded big-endian encoding; throws if the value does not fit.
Octets<32> bn_to32(const BIGNUM* value);

}  // namespace blecert::ossl
