// Copyright 2026 The sgnav Authors
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

#ifndef SGNAV_ERRORS_HPP_
#define SGNAV_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace sgnav {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedObservation : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

/// Raised when the agent or simulator is driven into an invalid state.
class EpisodeFault : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// A completion backend could not produce a response after its retry budget.
class ProviderUnavailable : public Error {
 public:
  using Error::Error;
};

/// A scripted backend received a prompt its script did not anticipate.
class ScriptMismatch : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

/// Non-fatal events (dropped pairs, fail-open edges, straddling footprints)
/// collected for reports and tests instead of being printed.
struct DiagnosticLog {
  std::vector<std::string> messages;
  void log(std::string message) { messages.push_back(std::move(message)); }
};

}  // namespace sgnav

#endif  // SGNAV_ERRORS_HPP_
