// Copyright 2026 The rydarp Authors
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

#include <cstddef>
#include <cstdint>
#include <functional>

namespace rydarp {

// SplitMix64 finalizer; turns structured seeds (seed ^ index) into
// well-mixed engine seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

// Seed for element `index` of a stream rooted at `seed`.
inline std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t index) noexcept
{
    return mix_seed(seed ^ index);
}

// Runs body(i) for i in [0, count) on up to `workers` threads (0 = hardware
// concurrency). Each index is visited exactly once; callers write results by
// index so the outcome does not depend on scheduling. The first exception
// (lowest index among those that failed) is rethrown after all workers stop.
void parallel_for_index(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace rydarp
