// Copyright 2026 The Resonance Lab Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RESONANCE_ERRORS_H_
#define RESONANCE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace resonance {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that does not describe a well-formed object: bad numbers, unknown
// ids, negative valuations, non-total payment maps.
class MalformedInput : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

// An exhaustive search would exceed its configured bound.
class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

// A broker proposal whose allocation is not in the valid set.
class InvalidProposal : public Error {
 public:
  using Error::Error;
};

}  // namespace resonance

#endif  // RESONANCE_ERRORS_H_
