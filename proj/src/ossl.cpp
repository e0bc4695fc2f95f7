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

#include "ossl.hpp"

#include <openssl/err.h>
#include <openssl/obj_mac.h>

#include <string>

namespace blecert::ossl {

void fail(const char* what) {
  std::string detail = what;
  if (const unsigned long err = ERR_get_error(); err != 0) {
    char buf[256];
    ERR_error_string_n(err, buf, sizeof(buf));
    detail += ": ";
    detail += buf;
  }
  ERR_clear_error();
  throw Error(Errc::Internal, detail);
}

namespace {

struct Curve {
  EC_GROUP* group = nullptr;
  BIGNUM* prime = nullptr;

  Curve() {
    group = EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1);
    prime = BN_new();
    if (group == nullptr || prime == nullptr ||
        EC_GROUP_get_curve(group, prime, nullptr, nullptr, nullptr) != 1) {
      fail("P-256 group setup");
    }
  }
  ~Curve() {
    BN_free(prime);
    EC_GROUP_free(group);
  }
  Curve(const Curve&) = delete;
  Curve& operator=(const Curve&) = delete;
};

const Curve& curve() {
  static const Curve instance;
  return instance;
}

}  // namespace

const EC_GROUP* p256() { return curve().group; }
const BIGNUM* p256_order() { return EC_GROUP_get0_order(p256()); }
const BIGNUM* p256_prime() { return curve().prime; }

BnPtr new_bn() {
  BnPtr bn(BN_new());
  if (!bn) fail("BN_new");
  return bn;
}

BnCtxPtr new_ctx() {
  BnCtxPtr ctx(BN_CTX_new());
  if (!ctx) fail("BN_CTX_new");
  return ctx;
}

PointPtr new_point() {
  PointPtr point(EC_POINT_new(p256()));
  if (!point) fail("EC_POINT_new");
  return point;
}

BnPtr bn_from(ByteView big_endian) {
  BnPtr bn(BN_bin2bn(big_endian.data(), static_cast<int>(big_endian.size()),
                     nullptr));
  if (!bn) fail("BN_bin2bn");
  return bn;
}

Octets<32> bn_to32(const BIGNUM* value) {
  Octets<32> out{};
  if (BN_bn2binpad(value, out.data(), static_cast<int>(out.size())) != 32) {
    fail("BN_bn2binpad");
  }
  return out;
}

}  // namespace blecert::ossl
