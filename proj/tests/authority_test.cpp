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

#include <atomic>
#include <functional>
#include <set>
#include <thread>

#include "blecert/authority.hpp"
#include "blecert/error.hpp"
#include "support.hpp"

namespace blecert {
namespace {

using testing_support::serial_of;

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Internal;
}

TEST(Authority, InitStartsEmptyWithEvenYRoot) {
  SeededRandom rng(1);
  const RootAuthority ca = RootAuthority::init(rng);
  EXPECT_EQ(ca.registry_size(), 0U);
  EXPECT_TRUE(ca.public_key().has_even_y());
  EXPECT_TRUE(oracle::on_curve({oracle::from_bytes(ca.public_key().x()),
                                oracle::from_bytes(ca.public_key().y())}));
}

TEST(Authority, DifferentSeedsDifferentRoots) {
  SeededRandom a(1);
  SeededRandom b(2);
  EXPECT_NE(RootAuthority::init(a).public_key(),
            RootAuthority::init(b).public_key());
}

TEST(Authority, RegisteredManufacturerCanIssue) {
  testing_support::IssuerFixture fx(3);
  const auto creds = fx.issue(serial_of(1));
  EXPECT_EQ(verify_cert(creds.certificate, fx.authority.public_key()),
            CertVerdict::Accept);
  EXPECT_EQ(creds.certificate.subject_public_key, creds.keys.public_key.x());
  EXPECT_EQ(fx.authority.registry_size(), 1U);
}

TEST(Authority, UnregisteredManufacturerIsRejected) {
  SeededRandom rng(4);
  RootAuthority ca = RootAuthority::init(rng);
  const auto rogue = update::Manufacturer::create(rng);
  const auto subject = crypto::generate_keypair(rng);
  EXPECT_EQ(code_of([&] {
              (void)ca.issue(rogue.request_for(serial_of(1), subject.public_key));
            }),
            Errc::RequestRejected);
  EXPECT_EQ(ca.registry_size(), 0U);
}

TEST(Authority, DuplicateManufacturer) {
  testing_support::IssuerFixture fx(5);
  EXPECT_EQ(code_of([&] {
              fx.authority.register_manufacturer(fx.manufacturer.public_key());
            }),
            Errc::DuplicateManufacturer);
}

TEST(Authority, DuplicateSerialLeavesRegistryUnchanged) {
  testing_support::IssuerFixture fx(6);
  const auto first = fx.issue(serial_of(1));
  EXPECT_EQ(code_of([&] { (void)fx.issue(serial_of(1)); }), Errc::DuplicateSerial);
  EXPECT_EQ(fx.authority.registry_size(), 1U);
  EXPECT_EQ(fx.authority.lookup(serial_of(1)), first.certificate);
}

TEST(Authority, TamperedRequestIsRejectedAtEveryBit) {
  testing_support::IssuerFixture fx(7);
  const auto subject = crypto::generate_keypair(fx.rng);
  const IssuanceRequest good =
      fx.manufacturer.request_for(serial_of(1), subject.public_key);
  for (std::size_t bit = 0; bit < 32 * 8; ++bit) {
    IssuanceRequest bad = good;
    bad.subject_public_key[bit / 8] ^= static_cast<std::uint8_t>(1U << (bit % 8));
    ASSERT_EQ(code_of([&] { (void)fx.authority.issue(bad); }),
              Errc::RequestRejected)
        << "bit " << bit;
  }
  for (std::size_t bit = 0; bit < 6 * 8; ++bit) {
    IssuanceRequest bad = good;
    bad.serial[bit / 8] ^= static_cast<std::uint8_t>(1U << (bit % 8));
    ASSERT_EQ(code_of([&] { (void)fx.authority.issue(bad); }),
              Errc::RequestRejected);
  }
  EXPECT_EQ(fx.authority.registry_size(), 0U);
  EXPECT_NO_THROW((void)fx.authority.issue(good));
}

TEST(Authority, SubjectKeyMustBeOnCurve) {
  testing_support::IssuerFixture fx(8);
  Octets<32> x{};
  for (unsigned v = 1;; ++v) {
    const mpz_class c = v;
    if (!oracle::sqrt_mod_p(c * c * c - 3 * c + oracle::curve_b())) {
      x = oracle::to_bytes32(c);
      break;
    }
  }
  const auto req = IssuanceRequest::create(serial_of(1), x,
                                           fx.manufacturer.private_key());
  EXPECT_EQ(code_of([&] { (void)fx.authority.issue(req); }), Errc::BadSubjectKey);
}

TEST(Authority, LookupIsReadOnly) {
  testing_support::IssuerFixture fx(9);
  const auto creds = fx.issue(serial_of(1));
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(fx.authority.lookup(serial_of(1)), creds.certificate);
    EXPECT_FALSE(fx.authority.lookup(serial_of(2)).has_value());
  }
  EXPECT_EQ(fx.authority.registry_size(), 1U);
}

TEST(Authority, ReissueReplacesExistingSerialOnly) {
  testing_support::IssuerFixture fx(10);
  (void)fx.issue(serial_of(1));
  const auto fresh = crypto::generate_keypair(fx.rng);
  const auto cert = fx.authority.reissue(
      fx.manufacturer.request_for(serial_of(1), fresh.public_key));
  EXPECT_EQ(fx.authority.lookup(serial_of(1)), cert);
  EXPECT_EQ(code_of([&] {
              (void)fx.authority.reissue(
                  fx.manufacturer.request_for(serial_of(9), fresh.public_key));
            }),
            Errc::UnknownSerial);
}

TEST(Authority, RandomizedIssuanceAlwaysVerifiesAndSerialsStayUnique) {
  testing_support::IssuerFixture fx(11);
  std::set<Serial> seen;
  for (int i = 0; i < 60; ++i) {
    const auto pick = fx.rng.draw<1>()[0] % 24;
    const Serial serial = serial_of(static_cast<std::uint8_t>(pick));
    try {
      const auto creds = fx.issue(serial);
      ASSERT_TRUE(seen.insert(serial).second);
      ASSERT_EQ(verify_cert(creds.certificate, fx.authority.public_key()),
                CertVerdict::Accept);
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), Errc::DuplicateSerial);
      ASSERT_TRUE(seen.contains(serial));
    }
  }
  EXPECT_EQ(fx.authority.registry_size(), seen.size());
  for (const auto& c : fx.authority.certificates()) {
    EXPECT_EQ(verify_cert(c, fx.authority.public_key()), CertVerdict::Accept);
  }
}

TEST(Authority, DeterministicIssuance) {
  testing_support::IssuerFixture a(12);
  testing_support::IssuerFixture b(12);
  EXPECT_EQ(a.issue(serial_of(1)).certificate, b.issue(serial_of(1)).certificate);
}

TEST(Authority, RestoreRoundTrip) {
  testing_support::IssuerFixture fx(13);
  (void)fx.issue(serial_of(1));
  (void)fx.issue(serial_of(2));
  const RootAuthority copy =
      RootAuthority::restore(fx.authority.private_key(),
                             fx.authority.manufacturers(),
                             fx.authority.certificates());
  EXPECT_EQ(copy.public_key(), fx.authority.public_key());
  EXPECT_EQ(copy.certificates(), fx.authority.certificates());
}

TEST(Authority, ConcurrentLookupsDuringIssuance) {
  testing_support::IssuerFixture fx(14);
  (void)fx.issue(serial_of(0));
  std::vector<crypto::KeyPair> keys;
  for (int i = 0; i < 16; ++i) keys.push_back(crypto::generate_keypair(fx.rng));
  std::atomic<bool> done{false};
  std::thread reader([&] {
    while (!done) {
      ASSERT_TRUE(fx.authority.lookup(serial_of(0)).has_value());
    }
  });
  for (int i = 0; i < 16; ++i) {
    (void)fx.authority.issue(fx.manufacturer.request_for(
        serial_of(static_cast<std::uint8_t>(i + 1)), keys[i].public_key));
  }
  done = true;
  reader.join();
  EXPECT_EQ(fx.authority.registry_size(), 17U);
}

}  // namespace
}  // namespace blecert
