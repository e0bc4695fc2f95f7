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

#include <openssl/err.h>
#include <openssl/hmac.h>

#include <functional>

#include "blecert/crypto.hpp"
#include "ossl.hpp"

namespace blecert::crypto {

namespace {

using ossl::BnPtr;

bool in_scalar_range(const BIGNUM* v) {
  return !BN_is_zero(v) && !BN_is_negative(v) &&
         BN_cmp(v, ossl::p256_order()) < 0;
}

ossl::PointPtr to_point(const PublicKey& key, BN_CTX* ctx) {
  auto point = ossl::new_point();
  const BnPtr x = ossl::bn_from(key.x());
  const BnPtr y = ossl::bn_from(key.y());
  ossl::check(EC_POINT_set_affine_coordinates(ossl::p256(), point.get(),
                                              x.get(), y.get(), ctx),
              "EC_POINT_set_affine_coordinates");
  return point;
}

std::pair<Octets<32>, Octets<32>> affine(const EC_POINT* point, BN_CTX* ctx) {
  const BnPtr x = ossl::new_bn();
  const BnPtr y = ossl::new_bn();
  ossl::check(EC_POINT_get_affine_coordinates(ossl::p256(), point, x.get(),
                                              y.get(), ctx),
              "EC_POINT_get_affine_coordinates");
  return {ossl::bn_to32(x.get()), ossl::bn_to32(y.get())};
}

// Leftmost 256 bits of the digest as an integer; P-256 and SHA-256 have the
// same bit length so no shift is needed.
BnPtr message_representative(ByteView message) {
  return ossl::bn_from(sha256(message));
}

std::optional<Signature> sign_with_nonce(const BIGNUM* d, const BIGNUM* z,
                                         const BIGNUM* k, BN_CTX* ctx) {
  const BIGNUM* n = ossl::p256_order();
  auto point = ossl::new_point();
  ossl::check(EC_POINT_mul(ossl::p256(), point.get(), k, nullptr, nullptr, ctx),
              "EC_POINT_mul");
  const BnPtr rx = ossl::new_bn();
  ossl::check(EC_POINT_get_affine_coordinates(ossl::p256(), point.get(),
                                              rx.get(), nullptr, ctx),
              "EC_POINT_get_affine_coordinates");
  const BnPtr r = ossl::new_bn();
  ossl::check(BN_nnmod(r.get(), rx.get(), n, ctx), "BN_nnmod");
  if (BN_is_zero(r.get())) return std::nullopt;

  // s = k^-1 (z + r d) mod n
  const BnPtr kinv = ossl::new_bn();
  if (BN_mod_inverse(kinv.get(), k, n, ctx) == nullptr) {
    ossl::fail("BN_mod_inverse");
  }
  const BnPtr rd = ossl::new_bn();
  ossl::check(BN_mod_mul(rd.get(), r.get(), d, n, ctx), "BN_mod_mul");
  const BnPtr sum = ossl::new_bn();
  ossl::check(BN_mod_add(sum.get(), z, rd.get(), n, ctx), "BN_mod_add");
  const BnPtr s = ossl::new_bn();
  ossl::check(BN_mod_mul(s.get(), kinv.get(), sum.get(), n, ctx), "BN_mod_mul");
  if (BN_is_zero(s.get())) return std::nullopt;

  return Signature{ossl::bn_to32(r.get()), ossl::bn_to32(s.get())};
}

Octets<32> hmac_sha256(ByteView key, ByteView data) {
  Octets<32> out{};
  unsigned int len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(),
           data.size(), out.data(), &len) == nullptr ||
      len != out.size()) {
    ossl::fail("HMAC");
  }
  return out;
}

// RFC 6979 section 3.2 for qlen = hlen = 256. Candidates are handed to
// accept() until it takes one.
void rfc6979_nonces(const Octets<32>& private_key, const Octets<32>& digest,
                    const std::function<bool(const BIGNUM*)>& accept) {
  auto ctx = ossl::new_ctx();
  const BnPtr h = ossl::bn_from(digest);
  const BnPtr h_mod = ossl::new_bn();
  ossl::check(BN_nnmod(h_mod.get(), h.get(), ossl::p256_order(), ctx.get()),
              "BN_nnmod");
  const Octets<32> h_octets = ossl::bn_to32(h_mod.get());

  Octets<32> v;
  v.fill(0x01);
  Octets<32> k{};

  auto seeded = [&](std::uint8_t tag) {
    Bytes data(v.begin(), v.end());
    data.push_back(tag);
    append(data, private_key);
    append(data, h_octets);
    k = hmac_sha256(k, data);
    secure_wipe(data);
    v = hmac_sha256(k, v);
  };
  seeded(0x00);
  seeded(0x01);

  for (;;) {
    v = hmac_sha256(k, v);
    const BnPtr candidate = ossl::bn_from(v);
    if (in_scalar_range(candidate.get()) && accept(candidate.get())) break;
    Bytes data(v.begin(), v.end());
    data.push_back(0x00);
    k = hmac_sha256(k, data);
    v = hmac_sha256(k, v);
  }
  secure_wipe(k);
  secure_wipe(v);
}

}  // namespace

PrivateScalar PrivateScalar::from_bytes(const Octets<kScalarSize>& value) {
  const BnPtr v = ossl::bn_from(value);
  if (!in_scalar_range(v.get())) {
    throw Error(Errc::InvalidScalar, "scalar outside [1, n)");
  }
  return PrivateScalar(value);
}

PrivateScalar PrivateScalar::from_hex(std::string_view hex) {
  auto raw = octets_from_hex<kScalarSize>(hex);
  PrivateScalar out = from_bytes(raw);
  secure_wipe(raw);
  return out;
}

PrivateScalar::~PrivateScalar() { secure_wipe(value_); }

bool PrivateScalar::operator==(const PrivateScalar& other) const {
  return constant_time_equal(value_, other.value_);
}

PublicKey PublicKey::from_affine(const Octets<kCoordinateSize>& x,
                                 const Octets<kCoordinateSize>& y) {
  auto ctx = ossl::new_ctx();
  const BnPtr bx = ossl::bn_from(x);
  const BnPtr by = ossl::bn_from(y);
  if (BN_cmp(bx.get(), ossl::p256_prime()) >= 0 ||
      BN_cmp(by.get(), ossl::p256_prime()) >= 0) {
    throw Error(Errc::InvalidPoint, "coordinate not reduced mod p");
  }
  auto point = ossl::new_point();
  if (EC_POINT_set_affine_coordinates(ossl::p256(), point.get(), bx.get(),
                                      by.get(), ctx.get()) != 1 ||
      EC_POINT_is_on_curve(ossl::p256(), point.get(), ctx.get()) != 1 ||
      EC_POINT_is_at_infinity(ossl::p256(), point.get()) == 1) {
    ERR_clear_error();
    throw Error(Errc::InvalidPoint, "point is not on P-256");
  }
  return PublicKey(x, y);
}

std::optional<PublicKey> PublicKey::try_from_x(
    const Octets<kCoordinateSize>& x) {
  auto ctx = ossl::new_ctx();
  const BnPtr bx = ossl::bn_from(x);
  if (BN_cmp(bx.get(), ossl::p256_prime()) >= 0) return std::nullopt;
  auto point = ossl::new_point();
  if (EC_POINT_set_compressed_coordinates(ossl::p256(), point.get(), bx.get(),
                                          0, ctx.get()) != 1) {
    ERR_clear_error();
    return std::nullopt;
  }
  auto [px, py] = affine(point.get(), ctx.get());
  return PublicKey(px, py);
}

PublicKey PublicKey::from_x(const Octets<kCoordinateSize>& x) {
  if (auto key = try_from_x(x)) return *key;
  throw Error(Errc::InvalidPoint, "x-coordinate has no curve solution");
}

PublicKey derive_public_key(const PrivateScalar& scalar) {
  auto ctx = ossl::new_ctx();
  const BnPtr d = ossl::bn_from(scalar.bytes());
  auto point = ossl::new_point();
  ossl::check(EC_POINT_mul(ossl::p256(), point.get(), d.get(), nullptr,
                           nullptr, ctx.get()),
              "EC_POINT_mul");
  auto [x, y] = affine(point.get(), ctx.get());
  return PublicKey::from_affine(x, y);
}

KeyPair generate_keypair(RandomSource& rng) {
  // Half of all scalars qualify, so running out of attempts means the
  // randomness source is broken.
  constexpr int kMaxAttempts = 512;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Octets<kScalarSize> raw = rng.draw<kScalarSize>();
    const BnPtr v = ossl::bn_from(raw);
    if (!in_scalar_range(v.get())) continue;
    PrivateScalar scalar = PrivateScalar::from_bytes(raw);
    secure_wipe(raw);
    PublicKey pub = derive_public_key(scalar);
    if (!pub.has_even_y()) continue;
    return KeyPair{std::move(scalar), pub};
  }
  throw Error(Errc::RandomnessFailure, "no usable scalar from randomness");
}

SharedSecret ecdh(const PrivateScalar& local, const PublicKey& remote) {
  auto ctx = ossl::new_ctx();
  const auto peer = to_point(remote, ctx.get());
  const BnPtr d = ossl::bn_from(local.bytes());
  auto product = ossl::new_point();
  ossl::check(EC_POINT_mul(ossl::p256(), product.get(), nullptr, peer.get(),
                           d.get(), ctx.get()),
              "EC_POINT_mul");
  if (EC_POINT_is_at_infinity(ossl::p256(), product.get()) == 1) {
    throw Error(Errc::IdentityResult);
  }
  return SharedSecret{affine(product.get(), ctx.get()).first};
}

Signature ecdsa_sign(const PrivateScalar& key, ByteView message,
                     RandomSource& rng) {
  auto ctx = ossl::new_ctx();
  const BnPtr d = ossl::bn_from(key.bytes());
  const BnPtr z = message_representative(message);
  constexpr int kMaxAttempts = 512;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Octets<32> raw = rng.draw<32>();
    const BnPtr k = ossl::bn_from(raw);
    secure_wipe(raw);
    if (!in_scalar_range(k.get())) continue;
    if (auto sig = sign_with_nonce(d.get(), z.get(), k.get(), ctx.get())) {
      return *sig;
    }
  }
  throw Error(Errc::RandomnessFailure, "no usable signing nonce");
}

Signature ecdsa_sign_deterministic(const PrivateScalar& key, ByteView message) {
  auto ctx = ossl::new_ctx();
  const BnPtr d = ossl::bn_from(key.bytes());
  const Octets<32> digest = sha256(message);
  const BnPtr z = ossl::bn_from(digest);
  std::optional<Signature> result;
  rfc6979_nonces(key.bytes(), digest, [&](const BIGNUM* k) {
    result = sign_with_nonce(d.get(), z.get(), k, ctx.get());
    return result.has_value();
  });
  return *result;
}

bool ecdsa_verify(const PublicKey& key, ByteView message, const Signature& sig) {
  auto ctx = ossl::new_ctx();
  const BIGNUM* n = ossl::p256_order();
  const BnPtr r = ossl::bn_from(sig.r);
  const BnPtr s = ossl::bn_from(sig.s);
  if (!in_scalar_range(r.get()) || !in_scalar_range(s.get())) return false;

  const BnPtr z = message_representative(message);
  const BnPtr w = ossl::new_bn();
  if (BN_mod_inverse(w.get(), s.get(), n, ctx.get()) == nullptr) {
    ERR_clear_error();
    return false;
  }
  const BnPtr u1 = ossl::new_bn();
  const BnPtr u2 = ossl::new_bn();
  ossl::check(BN_mod_mul(u1.get(), z.get(), w.get(), n, ctx.get()),
              "BN_mod_mul");
  ossl::check(BN_mod_mul(u2.get(), r.get(), w.get(), n, ctx.get()),
              "BN_mod_mul");

  const auto q = to_point(key, ctx.get());
  auto sum = ossl::new_point();
  ossl::check(EC_POINT_mul(ossl::p256(), sum.get(), u1.get(), q.get(), u2.get(),
                           ctx.get()),
              "EC_POINT_mul");
  if (EC_POINT_is_at_infinity(ossl::p256(), sum.get()) == 1) return false;

  const BnPtr x = ossl::new_bn();
  ossl::check(EC_POINT_get_affine_coordinates(ossl::p256(), sum.get(), x.get(),
                                              nullptr, ctx.get()),
              "EC_POINT_get_affine_coordinates");
  const BnPtr v = ossl::new_bn();
  ossl::check(BN_nnmod(v.get(), x.get(), n, ctx.get()), "BN_nnmod");
  return BN_cmp(v.get(), r.get()) == 0;
}

}  // namespace blecert::crypto
