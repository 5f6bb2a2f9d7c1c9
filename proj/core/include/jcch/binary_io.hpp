/*
 * Copyright 2026 The JCCH Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef JCCH_BINARY_IO_HPP_
#define JCCH_BINARY_IO_HPP_

// Little-endian primitives shared by the dataset, coefficient, checkpoint and
// code file formats. Every file starts with a 4-byte magic and a u16 version.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "jcch/error.hpp"

namespace jcch::io {

class Writer {
 public:
  void Bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    buffer_.insert(buffer_.end(), p, p + n);
  }
  void U8(std::uint8_t v) { buffer_.push_back(v); }
  void U16(std::uint16_t v) { PutLe(v); }
  void U32(std::uint32_t v) { PutLe(v); }
  void U64(std::uint64_t v) { PutLe(v); }
  void F32(float v) { PutLe(std::bit_cast<std::uint32_t>(v)); }
  void F64(double v) { PutLe(std::bit_cast<std::uint64_t>(v)); }
  void Header(std::string_view magic, std::uint16_t version) {
    Bytes(magic.data(), magic.size());
    U16(version);
  }

  const std::vector<std::uint8_t>& buffer() const { return buffer_; }

  void WriteTo(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(buffer_.data()),
              static_cast<std::streamsize>(buffer_.size()));
    if (!out) throw IoError("write failed: " + path.string());
  }

 private:
  template <typename U>
  void PutLe(U v) {
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      buffer_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
  }

  std::vector<std::uint8_t> buffer_;
};

class Reader {
 public:
  Reader(std::vector<std::uint8_t> data, std::string name)
      : data_(std::move(data)), name_(std::move(name)) {}

  static Reader FromFile(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    return Reader(std::move(data), path.string());
  }

  void Bytes(void* out, std::size_t n) {
    Need(n);
    std::memcpy(out, data_.data() + pos_, n);
    pos_ += n;
  }
  std::uint8_t U8() { return GetLe<std::uint8_t>(); }
  std::uint16_t U16() { return GetLe<std::uint16_t>(); }
  std::uint32_t U32() { return GetLe<std::uint32_t>(); }
  std::uint64_t U64() { return GetLe<std::uint64_t>(); }
  float F32() { return std::bit_cast<float>(GetLe<std::uint32_t>()); }
  double F64() { return std::bit_cast<double>(GetLe<std::uint64_t>()); }

  // Checks magic and version; returns the version read.
  std::uint16_t Header(std::string_view magic, std::uint16_t supported) {
    char got[4] = {};
    if (data_.size() < magic.size()) {
      throw FormatError(name_ + ": truncated header");
    }
    Bytes(got, magic.size());
    if (std::string_view(got, magic.size()) != magic) {
      throw FormatError(name_ + ": bad magic, expected " + std::string(magic));
    }
    const std::uint16_t version = U16();
    if (version != supported) {
      throw UnsupportedVersionError(std::string(magic), version);
    }
    return version;
  }

  void ExpectEnd() const {
    if (pos_ != data_.size()) {
      throw FormatError(name_ + ": trailing bytes after payload");
    }
  }

  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void Need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw FormatError(name_ + ": truncated file");
  }

  template <typename U>
  U GetLe() {
    Need(sizeof(U));
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      v |= static_cast<U>(static_cast<U>(data_[pos_ + i]) << (8 * i));
    }
    pos_ += sizeof(U);
    return v;
  }

  std::vector<std::uint8_t> data_;
  std::string name_;
  std::size_t pos_ = 0;
};

}  // namespace jcch::io

#endif  // JCCH_BINARY_IO_HPP_
