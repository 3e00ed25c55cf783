/*
 * Copyright 2026 The fairpen Authors.
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

#ifndef FAIRPEN_ERROR_HPP_
#define FAIRPEN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace fairpen {

// Mirrors fp_status in fairpen.h; values must stay in sync.
enum class ErrorCode {
  kInvalidArgument = 1,
  kIo = 2,
  kData = 3,
  kUndefinedMetric = 4,
  kConvergence = 5,
  kSeparation = 6,
  kConfig = 7,
  kInternal = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace fairpen

#endif  // FAIRPEN_ERROR_HPP_
