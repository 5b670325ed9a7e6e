// Copyright 2026 The SFL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SFL_COMMON_DIGEST_H_
#define SFL_COMMON_DIGEST_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sfl {

using Digest = std::array<std::uint8_t, 32>;

Digest Sha256(std::span<const std::uint8_t> bytes);

std::string ToHex(std::span<const std::uint8_t> bytes);
// Throws kParse on odd length or non-hex characters.
std::vector<std::uint8_t> FromHex(std::string_view hex);

Digest DigestFromHex(std::string_view hex);

// Canonical byte encoding used for every hash commitment: little-endian
// 64-bit integers, little-endian IEEE-754 doubles, and u64 length prefixes
// in front of every variable-length sequence.
class ByteWriter {
 public:
  ByteWriter& U64(std::uint64_t v);
  ByteWriter& F64(double v);
  ByteWriter& Bool(bool v) { return U64(v ? 1 : 0); }
  // Length-prefixed.
  ByteWriter& Bytes(std::span<const std::uint8_t> bytes);
  ByteWriter& String(std::string_view s);
  ByteWriter& F64Seq(std::span<const double> values);
  // No prefix; for fixed-width fields such as digests and addresses.
  ByteWriter& Raw(std::span<const std::uint8_t> bytes);

  const std::vector<std::uint8_t>& bytes() const { return buffer_; }
  std::vector<std::uint8_t> Release() { return std::move(buffer_); }
  Digest Hash() const { return Sha256(buffer_); }

 private:
  std::vector<std::uint8_t> buffer_;
};

// Inverse of ByteWriter. Throws kParse when reading past the end.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t U64();
  double F64();
  bool Bool() { return U64() != 0; }
  std::vector<std::uint8_t> Bytes();
  std::string String();
  std::vector<double> F64Seq();
  void Raw(std::span<std::uint8_t> out);

  bool AtEnd() const { return pos_ == bytes_.size(); }

 private:
  std::span<const std::uint8_t> Take(std::size_t n);

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace sfl

#endif  // SFL_COMMON_DIGEST_H_
