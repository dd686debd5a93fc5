//
// Copyright 2026 The xtars Authors
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
//

#ifndef XTARS_ERROR_H_
#define XTARS_ERROR_H_

#include <stdexcept>
#include <string>

namespace xtars {

// Coarse error categories. The CLI maps these onto structured stderr output
// and the service maps them onto HTTP status codes.
enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kLookup,
  kIntegrity,
  kIo,
  kState,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised when an llt_code is not part of the active ontology or label index.
class LookupError : public Error {
 public:
  explicit LookupError(const std::string& message)
      : Error(ErrorCode::kLookup, message) {}
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorCode::kInvalidArgument, message);
}

}  // namespace xtars

#endif  // XTARS_ERROR_H_
