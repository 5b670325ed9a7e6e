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

#include "sfl/common/digest.h"

#include <openssl/evp.h>

#include <bit>
#include <cstring>

#include "sfl/common/error.h"

namespace sfl {

Digest Sha256(std::span<const std::uint8_t> bytes) {
  Digest out{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(),
                 nullptr) != 1 ||
      len != out.size()) {
    Fail(ErrorCode::kInvalidArgument, "SHA-256 computation failed");
  }
  return out;
}

std::string ToHex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

namespace {

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::vector<std::uint8_t> FromHex(std::string_view hex) {
  Require(hex.size() % 2 == 0, ErrorCode::kParse, "odd-length hex string");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = HexValue(hex[2 * i]);
    int lo = HexValue(hex[2 * i + 1]);
    Require(hi >= 0 && lo >= 0, ErrorCode::kParse,
            "invalid hex character in '" + std::string(hex) + "'");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

Digest DigestFromHex(std::string_view hex) {
  auto bytes = FromHex(hex);
  Require(bytes.size() == 32, ErrorCode::kParse, "digest must be 64 hex chars");
  Digest d{};
  std::memcpy(d.data(), bytes.data(), d.size());
  return d;
}

ByteWriter& ByteWriter::U64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buffer_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  return *this;
}

ByteWriter& ByteWriter::F64(double v) {
  return U64(std::bit_cast<std::uint64_t>(v));
}

ByteWriter& ByteWriter::Bytes(std::span<const std::uint8_t> bytes) {
  U64(bytes.size());
  return Raw(bytes);
}

ByteWriter& ByteWriter::String(std::string_view s) {
  return Bytes({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
}

ByteWriter& ByteWriter::F64Seq(std::span<const double> values) {
  U64(values.size());
  for (double v : values) F64(v);
  return *this;
}

ByteWriter& ByteWriter::Raw(std::span<const std::uint8_t> bytes) {
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
  return *this;
}

std::span<const std::uint8_t> ByteReader::Take(std::size_t n) {
  Require(n <= bytes_.size() - pos_, ErrorCode::kParse, "truncated payload");
  auto out = bytes_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::uint64_t ByteReader::U64() {
  auto b = Take(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double ByteReader::F64() { return std::bit_cast<double>(U64()); }

std::vector<std::uint8_t> ByteReader::Bytes() {
  auto n = U64();
  auto b = Take(n);
  return {b.begin(), b.end()};
}

std::string ByteReader::String() {
  auto b = Bytes();
  return {b.begin(), b.end()};
}

std::vector<double> ByteReader::F64Seq() {
  auto n = U64();
  Require(n <= (bytes_.size() - pos_) / 8, ErrorCode::kParse, "truncated sequence");
  std::vector<double> out(n);
  for (auto& v : out) v = F64();
  return out;
}

void ByteReader::Raw(std::span<std::uint8_t> out) {
  auto b = Take(out.size());
  std::memcpy(out.data(), b.data(), out.size());
}

}  // namespace sfl
