// Copyright 2026 The mathlens Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MATHLENS_ERROR_HPP_
#define MATHLENS_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace mathlens {

// Error categories. The C API maps these 1:1 onto ml_status codes, so keep
// the numbering stable.
enum class ErrCode : int {
  kIo = 1,
  kFormat = 2,        // malformed file header / schema
  kShape = 3,         // tensor shape disagreement
  kNonFinite = 4,     // NaN/Inf in a loaded tensor or activation
  kVocab = 5,         // vocabulary/config disagreement, duplicate tokens
  kOov = 6,           // out-of-vocabulary word
  kOverflow = 7,      // sequence length overflow
  kInvalidArg = 8,
  kParse = 9,         // expression syntax error
  kEval = 10,         // division by zero, unbound variable
  kNet = 11,          // client transport failure after retries
  kInternal = 12,
};

class Error : public std::runtime_error {
 public:
  Error(ErrCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrCode code() const { return code_; }

 private:
  ErrCode code_;
};

[[noreturn]] inline void fail(ErrCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace mathlens

#endif  // MATHLENS_ERROR_HPP_
