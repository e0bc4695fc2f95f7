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

#include <gtest/gtest.h>

#include <set>

#include "blecert/crypto.hpp"
#include "blecert/error.hpp"
#include "support.hpp"

namespace blecert::crypto {
namespace {

using testing_support::hex;
using testing_support::octets;

oracle::Point to_oracle(const PublicKey& key) {
  return {oracle::from_bytes(key.x()), oracle::from_bytes(key.y())};
}

const char* kRfcKey = "2b7e151628aed2a6abf7158809cf4f3c";
const char* kRfcMessage =
    "6bc1bee22e409f96e93d7e117393172aae2d8a571e03ac9c9eb76fac45af8e51"
    "30c81c46a35ce411e5fbc1191a0a52eff69f2445df4f9b17ad2b417be66c3710";

// ---------------------------------------------------------------- keys

TEST(KeyGeneration, SameSeedSameKeyPair) {
  SeededRandom a(42);
  SeededRandom b(42);
  const KeyPair ka = generate_keypair(a);
  const KeyPair kb = generate_keypair(b);
  EXPECT_EQ(ka.private_key, kb.private_key);
  EXPECT_EQ(ka.public_key, kb.public_key);
}

TEST(KeyGeneration, ThousandKeysHaveEvenYAndLieOnCurve) {
  SeededRandom rng(7);
  for (int i = 0; i < 1000; ++i) {
    const KeyPair kp = generate_keypair(rng);
    ASSERT_TRUE(kp.public_key.has_even_y());
    ASSERT_TRUE(oracle::on_curve(to_oracle(kp.public_key)));
  }
}

TEST(KeyGeneration, PublicKeyMatchesOracleMultiplication) {
  SeededRandom rng(8);
  for (int i = 0; i < 20; ++i) {
    const KeyPair kp = generate_keypair(rng);
    const auto expected = oracle::multiply(
        oracle::from_bytes(kp.private_key.bytes()), oracle::generator());
    ASSERT_TRUE(expected.has_value());
    EXPECT_EQ(to_oracle(kp.public_key), *expected);
  }
}

TEST(KeyGeneration, ScalarOneIsRejectedBecauseGeneratorHasOddY) {
  // Base point y ends in ...f5, so d = 1 breaks the even-y convention.
  ASSERT_TRUE(mpz_odd_p(oracle::generator().y.get_mpz_t()));
  testing_support::ScriptedRandom rng(1);
  Bytes one(32, 0);
  one.back() = 1;
  rng.push(one);
  const KeyPair kp = generate_keypair(rng);
  EXPECT_NE(oracle::from_bytes(kp.private_key.bytes()), 1);
  EXPECT_TRUE(kp.public_key.has_even_y());
  EXPECT_NE(to_oracle(kp.public_key), oracle::generator());
}

TEST(KeyGeneration, FromXRecoversEvenYPoint) {
  SeededRandom rng(9);
  const KeyPair kp = generate_keypair(rng);
  EXPECT_EQ(PublicKey::from_x(kp.public_key.x()), kp.public_key);
}

TEST(PrivateScalar, RejectsZeroAndOrder) {
  EXPECT_THROW(PrivateScalar::from_bytes(Octets<32>{}), Error);
  const auto n = oracle::to_bytes32(oracle::order());
  EXPECT_THROW(PrivateScalar::from_bytes(n), Error);
  EXPECT_NO_THROW(PrivateScalar::from_bytes(
      oracle::to_bytes32(oracle::order() - 1)));
}

// ---------------------------------------------------------------- ECDH

TEST(Ecdh, SymmetricOverHundredPairs) {
  SeededRandom rng(100);
  for (int i = 0; i < 100; ++i) {
    const KeyPair a = generate_keypair(rng);
    const KeyPair b = generate_keypair(rng);
    ASSERT_EQ(ecdh(a.private_key, b.public_key),
              ecdh(b.private_key, a.public_key));
  }
}

TEST(Ecdh, MatchesOracleScalarMultiplication) {
  SeededRandom rng(101);
  for (int i = 0; i < 10; ++i) {
    const KeyPair a = generate_keypair(rng);
    const KeyPair b = generate_keypair(rng);
    const auto shared = oracle::multiply(
        oracle::from_bytes(a.private_key.bytes()), to_oracle(b.public_key));
    EXPECT_EQ(ecdh(a.private_key, b.public_key).value,
              oracle::to_bytes32(shared->x));
  }
}

TEST(Ecdh, CavpKnownAnswer) {
  const auto d = PrivateScalar::from_hex(
      "7d7dc5f71eb29ddaf80d6214632eeae03d9058af1fb6d22ed80badb62bc1a534");
  const auto q = PublicKey::from_affine(
      octets<32>("700c48f77f56584c5cc632ca65640db91b6bacce3a4df6b42ce7cc838833d287"),
      octets<32>("db71e509e3fd9b060ddb20ba5c51dcc5948d46fbf640dfe0441782cab85fa4ac"));
  const auto z = octets<32>(
      "46fc62106420ff012e54a434fbdd2d25ccc5852060561e68040dd7778997bd7b");
  EXPECT_EQ(ecdh(d, q).value, z);

  const auto oracle_z =
      oracle::multiply(oracle::from_bytes(d.bytes()), to_oracle(q));
  EXPECT_EQ(oracle::to_bytes32(oracle_z->x), z);

  const PublicKey qiut = derive_public_key(d);
  EXPECT_EQ(to_hex(qiut.x()),
            "ead218590119e8876b29146ff89ca61770c4edbbf97d38ce385ed281d8a6b230");
  EXPECT_EQ(to_hex(qiut.y()),
            "28af61281fd35e2fa7002523acc85a429cb06ee6648325389f59edfce1405141");
}

TEST(Ecdh, OffCurvePointIsRejected) {
  const auto x = octets<32>(
      "700c48f77f56584c5cc632ca65640db91b6bacce3a4df6b42ce7cc838833d287");
  auto y = octets<32>(
      "db71e509e3fd9b060ddb20ba5c51dcc5948d46fbf640dfe0441782cab85fa4ac");
  y.back() ^= 0x01;
  try {
    (void)PublicKey::from_affine(x, y);
    FAIL() << "off-curve point accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidPoint);
  }
}

TEST(Ecdh, CoordinateAbovePrimeIsRejected) {
  const auto p = oracle::to_bytes32(oracle::prime());
  EXPECT_THROW((void)PublicKey::from_affine(p, Octets<32>{}), Error);
  EXPECT_FALSE(PublicKey::try_from_x(p).has_value());
}

TEST(Ecdh, XWithoutCurveSolutionHasNoPublicKey) {
  // Find x such that x^3 - 3x + b is a non-residue.
  for (unsigned v = 1;; ++v) {
    const mpz_class x = v;
    const mpz_class rhs = x * x * x - 3 * x + oracle::curve_b();
    if (!oracle::sqrt_mod_p(rhs)) {
      EXPECT_FALSE(PublicKey::try_from_x(oracle::to_bytes32(x)).has_value());
      EXPECT_THROW((void)PublicKey::from_x(oracle::to_bytes32(x)), Error);
      break;
    }
  }
}

// ---------------------------------------------------------------- CMAC

struct CmacVector {
  std::size_t length;
  const char* mac;
};

class CmacRfc4493 : public ::testing::TestWithParam<CmacVector> {};

TEST_P(CmacRfc4493, MatchesPublishedVectorAndOracle) {
  const Bytes key = hex(kRfcKey);
  const Bytes all = hex(kRfcMessage);
  const ByteView msg(all.data(), GetParam().length);
  const Block out = aes_cmac(octets<16>(kRfcKey), msg);
  EXPECT_EQ(to_hex(out), GetParam().mac);
  EXPECT_EQ(out, oracle::cmac(key, msg));
}

INSTANTIATE_TEST_SUITE_P(
    Vectors, CmacRfc4493,
    ::testing::Values(CmacVector{0, "bb1d6929e95937287fa37d129b756746"},
                      CmacVector{16, "070a16b46b4d4144f79bdd9dd04a287c"},
                      CmacVector{40, "dfa66747de9ae63030ca32611497c827"},
                      CmacVector{64, "51f0bebf7e3b9d92fc49741779363cfe"}));

TEST(Cmac, AgreesWithOracleAcrossLengths) {
  SeededRandom rng(11);
  for (std::size_t len = 0; len <= 100; ++len) {
    const Block key = rng.draw<16>();
    Bytes msg(len);
    rng.fill(msg);
    ASSERT_EQ(aes_cmac(key, msg), oracle::cmac(key, msg)) << "length " << len;
  }
}

TEST(Cmac, Deterministic) {
  const Block key = octets<16>(kRfcKey);
  const Bytes msg = hex("00112233");
  EXPECT_EQ(aes_cmac(key, msg), aes_cmac(key, msg));
}

// ---------------------------------------------------------------- f4 / f5

TEST(F4, EqualsCmacOverConcatenatedX) {
  SeededRandom rng(12);
  const KeyPair c = generate_keypair(rng);
  const KeyPair p = generate_keypair(rng);
  const Nonce128 n = Nonce128::generate(rng);
  const ConfirmValue v = f4_confirm(c.public_key, p.public_key, n);
  EXPECT_EQ(v.value, testing_support::oracle_confirm(c.public_key, p.public_key, n));
  EXPECT_EQ(v, f4_confirm(c.public_key, p.public_key, n));
}

TEST(F4, EveryBitOfCentralXAffectsOutput) {
  SeededRandom rng(13);
  const KeyPair c = generate_keypair(rng);
  const KeyPair p = generate_keypair(rng);
  const Nonce128 n = Nonce128::generate(rng);
  const auto base = f4_confirm(c.public_key, p.public_key, n).value;
  int on_curve = 0;
  for (int bit = 0; bit < 256; ++bit) {
    Octets<32> x = c.public_key.x();
    x[bit / 8] ^= static_cast<std::uint8_t>(0x80U >> (bit % 8));
    Bytes msg(x.begin(), x.end());
    append(msg, p.public_key.x());
    const auto expected = oracle::cmac(n.value, msg);
    ASSERT_NE(expected, base) << "bit " << bit;
    if (auto flipped = PublicKey::try_from_x(x)) {
      ++on_curve;
      ASSERT_EQ(f4_confirm(*flipped, p.public_key, n).value, expected);
    }
  }
  EXPECT_GT(on_curve, 0);
}

TEST(F5, IntermediateKeyIsCmacUnderSalt) {
  SeededRandom rng(14);
  SharedSecret s{rng.draw<32>()};
  EXPECT_EQ(f5_intermediate_key(s), oracle::cmac(kF5Salt, s.value));
  EXPECT_EQ(to_hex(kF5Salt), "6c888391aaf5a53860370bdb5a6083be");
}

TEST(F5, LtkEqualsTwoStageComposition) {
  SeededRandom rng(15);
  const KeyPair a = generate_keypair(rng);
  const KeyPair b = generate_keypair(rng);
  const SharedSecret s = ecdh(a.private_key, b.public_key);
  const Nonce128 nc = Nonce128::generate(rng);
  const Nonce128 np = Nonce128::generate(rng);
  const auto mc = DeviceAddress::parse("C0:FF:EE:00:00:01");
  const auto mp = DeviceAddress::parse("C0:FF:EE:00:00:02");
  const Ltk ltk = f5_ltk(s, nc, np, mc, mp);
  EXPECT_EQ(ltk.bytes(), testing_support::oracle_ltk(s, nc, np, mc, mp));
  // Other side computes the same function from its own view of the secret.
  EXPECT_EQ(ltk, f5_ltk(ecdh(b.private_key, a.public_key), nc, np, mc, mp));

  Nonce128 other = nc;
  other.value[0] ^= 1;
  EXPECT_NE(f5_ltk(s, other, np, mc, mp), ltk);
  EXPECT_EQ(f5_ltk(s, other, np, mc, mp).bytes(),
            testing_support::oracle_ltk(s, other, np, mc, mp));
}

TEST(F5, AddressTypeIsPartOfTheKey) {
  SeededRandom rng(16);
  const SharedSecret s{rng.draw<32>()};
  const Nonce128 n = Nonce128::generate(rng);
  auto mc = DeviceAddress::parse("C0:FF:EE:00:00:01");
  const auto mp = DeviceAddress::parse("C0:FF:EE:00:00:02");
  const Ltk a = f5_ltk(s, n, n, mc, mp);
  mc.type = AddressType::StaticRandom;
  EXPECT_NE(a, f5_ltk(s, n, n, mc, mp));
}

TEST(F5, ZeroSecretIsRefused) {
  const Nonce128 n{};
  const auto addr = DeviceAddress::parse("00:00:00:00:00:01");
  try {
    (void)f5_ltk(SharedSecret{}, n, n, addr, addr);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ZeroSecret);
  }
}

// ---------------------------------------------------------------- ECDSA

TEST(Ecdsa, SignVerifyRoundTrip) {
  SeededRandom rng(17);
  const KeyPair kp = generate_keypair(rng);
  const Bytes msg = hex("deadbeef");
  const Signature sig = ecdsa_sign(kp.private_key, msg, rng);
  EXPECT_TRUE(ecdsa_verify(kp.public_key, msg, sig));
  EXPECT_TRUE(oracle::verify(to_oracle(kp.public_key), msg,
                             {oracle::from_bytes(sig.r), oracle::from_bytes(sig.s)}));
}

TEST(Ecdsa, WrongKeyRejects) {
  SeededRandom rng(18);
  const KeyPair kp = generate_keypair(rng);
  const KeyPair other = generate_keypair(rng);
  const Bytes msg = hex("01");
  EXPECT_FALSE(ecdsa_verify(other.public_key, msg,
                            ecdsa_sign(kp.private_key, msg, rng)));
}

TEST(Ecdsa, DeterministicNonceKnownAnswer) {
  const auto key = PrivateScalar::from_hex(
      "C9AFA9D845BA75166B5C215767B1D6934E50C3DB36E89B127B8A622B120F6721");
  const std::string text = "sample";
  const ByteView msg(reinterpret_cast<const std::uint8_t*>(text.data()),
                     text.size());
  const Signature sig = ecdsa_sign_deterministic(key, msg);
  EXPECT_EQ(to_hex(sig.r),
            "efd48b2aacb6a8fd1140dd9cd45e81d69d2c877b56aaf991c34d0ea84eaf3716");
  EXPECT_EQ(to_hex(sig.s),
            "f7cb1c942d657c41d436c7a1b6e29f65f3e900dbb9aff4064dc4ab2f843acda8");

  const auto expected = oracle::sign_with_k(
      oracle::from_bytes(key.bytes()), msg,
      oracle::from_hex("A6E3C57DD01ABE90086538398355DD4C3B17AA873382B0F24D6129493D8AAD60"));
  EXPECT_EQ(oracle::from_bytes(sig.r), expected.r);
  EXPECT_EQ(oracle::from_bytes(sig.s), expected.s);
  EXPECT_TRUE(ecdsa_verify(derive_public_key(key), msg, sig));
}

TEST(Ecdsa, EverySignatureBitFlipRejects) {
  SeededRandom rng(19);
  const KeyPair kp = generate_keypair(rng);
  const Bytes msg = hex("0102030405");
  const auto raw = ecdsa_sign(kp.private_key, msg, rng).encode();
  for (std::size_t bit = 0; bit < raw.size() * 8; ++bit) {
    auto flipped = raw;
    flipped[bit / 8] ^= static_cast<std::uint8_t>(1U << (bit % 8));
    ASSERT_FALSE(ecdsa_verify(kp.public_key, msg, Signature::decode(flipped)))
        << "bit " << bit;
  }
}

TEST(Ecdsa, ZeroComponentsReject) {
  SeededRandom rng(20);
  const KeyPair kp = generate_keypair(rng);
  const Bytes msg = hex("aa");
  Signature sig = ecdsa_sign(kp.private_key, msg, rng);
  Signature zero_r = sig;
  zero_r.r = {};
  Signature zero_s = sig;
  zero_s.s = {};
  EXPECT_FALSE(ecdsa_verify(kp.public_key, msg, zero_r));
  EXPECT_FALSE(ecdsa_verify(kp.public_key, msg, zero_s));
  Signature big = sig;
  big.s = oracle::to_bytes32(oracle::order());
  EXPECT_FALSE(ecdsa_verify(kp.public_key, msg, big));
}

TEST(Ecdsa, DecodeRequiresSixtyFourBytes) {
  EXPECT_THROW(Signature::decode(Bytes(63)), Error);
  EXPECT_THROW(Signature::decode(Bytes(65)), Error);
}

// ---------------------------------------------------------------- session

TEST(Session, RoundTripUpToMaxPayload) {
  SeededRandom rng(21);
  const Ltk ltk(rng.draw<16>());
  SessionChannel central(ltk, LinkDirection::CentralToPeripheral);
  SessionChannel peripheral(ltk, LinkDirection::PeripheralToCentral);
  for (std::size_t len = 0; len <= 251; len += 10) {
    Bytes msg(len);
    rng.fill(msg);
    const Bytes frame = central.seal(msg);
    EXPECT_EQ(frame.size(), len + kSessionOverhead);
    ASSERT_EQ(peripheral.open(frame), msg);
    ASSERT_EQ(central.open(peripheral.seal(msg)), msg);
  }
}

TEST(Session, RandomBitFlipsFailAuthentication) {
  SeededRandom rng(22);
  const Ltk ltk(rng.draw<16>());
  Bytes msg(64);
  rng.fill(msg);
  const Bytes frame =
      session_seal(ltk, LinkDirection::CentralToPeripheral, 5, msg);
  for (int trial = 0; trial < 100; ++trial) {
    Bytes bad = frame;
    const auto pick = rng.draw<4>();
    const std::uint32_t bit =
        ((pick[0] << 24) | (pick[1] << 16) | (pick[2] << 8) | pick[3]) %
        (bad.size() * 8);
    bad[bit / 8] ^= static_cast<std::uint8_t>(1U << (bit % 8));
    try {
      (void)session_open(ltk, LinkDirection::CentralToPeripheral, bad);
      FAIL() << "flip at bit " << bit << " accepted";
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), Errc::AuthFailure);
    }
  }
}

TEST(Session, ReplayIsDetected) {
  const Ltk ltk(Block{1, 2, 3});
  SessionChannel tx(ltk, LinkDirection::CentralToPeripheral);
  SessionChannel rx(ltk, LinkDirection::PeripheralToCentral);
  const Bytes frame = tx.seal(hex("cafe"));
  EXPECT_EQ(rx.open(frame), hex("cafe"));
  try {
    (void)rx.open(frame);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ReplayDetected);
  }
}

TEST(Session, ReflectedFrameFails) {
  const Ltk ltk(Block{9});
  SessionChannel a(ltk, LinkDirection::CentralToPeripheral);
  const Bytes frame = a.seal(hex("00"));
  EXPECT_THROW((void)a.open(frame), Error);
}

TEST(Session, WrongKeyFails) {
  const Bytes frame = session_seal(Ltk(Block{1}),
                                   LinkDirection::CentralToPeripheral, 1,
                                   hex("0011"));
  EXPECT_THROW((void)session_open(Ltk(Block{2}),
                                  LinkDirection::CentralToPeripheral, frame),
               Error);
}

// ---------------------------------------------------------------- misc

TEST(DeviceAddress, ParseAndEncode) {
  const auto a = DeviceAddress::parse("AA:BB:CC:DD:EE:FF", AddressType::StaticRandom);
  EXPECT_EQ(to_hex(a.encode()), "aabbccddeeff01");
  EXPECT_EQ(a.to_string(), "AA:BB:CC:DD:EE:FF");
  EXPECT_THROW(DeviceAddress::parse("AA:BB:CC:DD:EE"), Error);
  EXPECT_THROW(DeviceAddress::parse("AA:BB:CC:DD:EE:GG"), Error);
}

TEST(SeededRandom, ForksAreIndependentAndReproducible) {
  SeededRandom root(5);
  auto a = root.fork(1).draw<16>();
  auto b = SeededRandom(5).fork(1).draw<16>();
  auto c = SeededRandom(5).fork(2).draw<16>();
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

}  // namespace
}  // namespace blecert::crypto
