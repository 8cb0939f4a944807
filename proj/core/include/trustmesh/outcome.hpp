// Copyright 2026 The trustmesh Authors
//
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

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "trustmesh/bytes.hpp"

namespace trustmesh {

enum class AbortKind {
  InvalidProof,
  MissingMessage,
  InvalidShare,
  InvalidCommitment,
  InvalidPartial,
  MissingPartial,
  Equivocation,
};

inline const char* to_string(AbortKind k) {
  switch (k) {
    case AbortKind::InvalidProof: return "invalid_proof";
    case AbortKind::MissingMessage: return "missing_message";
    case AbortKind::InvalidShare: return "invalid_share";
    case AbortKind::InvalidCommitment: return "invalid_commitment";
    case AbortKind::InvalidPartial: return "invalid_partial";
    case AbortKind::MissingPartial: return "missing_partial";
    case AbortKind::Equivocation: return "equivocation";
  }
  return "unknown";
}

/// A protocol-level abort naming the participants held responsible.
struct Abort {
  AbortKind kind;
  std::vector<ParticipantId> culprits;

  [[nodiscard]] std::string describe() const {
    std::string s = to_string(kind);
    s += " [";
    for (std::size_t i = 0; i < culprits.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(culprits[i]);
    }
    return s + "]";
  }
  friend bool operator==(const Abort&, const Abort&) = default;
};

/// Either a value or an Abort. Protocol misbehaviour by peers is reported
/// this way; misuse of the API by the caller throws instead.
template <class T>
class Outcome {
 public:
  Outcome(T value) : v_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Outcome(Abort abort) : v_(std::move(abort)) {}  // NOLINT(google-explicit-constructor)

  [[nodiscard]] bool ok() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return ok(); }

  [[nodiscard]] const T& value() const& {
    if (!ok()) throw std::logic_error("Outcome::value on abort: " + abort().describe());
    return std::get<T>(v_);
  }
  [[nodiscard]] T&& value() && {
    if (!ok()) throw std::logic_error("Outcome::value on abort: " + abort().describe());
    return std::get<T>(std::move(v_));
  }
  [[nodiscard]] const Abort& abort() const {
    if (ok()) throw std::logic_error("Outcome::abort on success");
    return std::get<Abort>(v_);
  }

 private:
  std::variant<T, Abort> v_;
};

}  // namespace trustmesh
