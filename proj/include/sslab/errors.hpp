// Copyright 2026 The sslab Authors
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

namespace sslab {

/// Argument outside the mathematical domain of a function.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Request refused because it would exceed a size or time cap.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Caller broke a documented precondition of a stateful structure.
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace sslab
