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

#ifndef JCCH_ERROR_HPP_
#define JCCH_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace jcch {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition or parameter violation (bad spec, index out of range, shape
// mismatch).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed persisted file: bad magic, truncated payload, or a version this
// build does not read.
class FormatError : public Error {
 public:
  using Error::Error;
};

class UnsupportedVersionError : public FormatError {
 public:
  UnsupportedVersionError(const std::string& magic, unsigned version)
      : FormatError("unsupported " + magic + " file version " +
                    std::to_string(version)),
        version_(version) {}
  unsigned version() const { return version_; }

 private:
  unsigned version_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// The label structure admits no (anchor, positive, negative) triplet, so the
// coefficient normalizer is zero.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

}  // namespace jcch

#endif  // JCCH_ERROR_HPP_
