// Copyright 2026 The w2lab Authors
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

// Counter-based random streams (Philox4x32-10).
//
// A stream is identified by (master seed, experiment id, stream index). The
// key is derived from the first two; the stream index occupies the upper
// half of the 128-bit counter and the draw index the lower half, so two
// distinct stream indices can never visit the same counter value.

#ifndef W2LAB_RNG_HPP_
#define W2LAB_RNG_HPP_

#include <array>
#include <cstdint>

namespace w2lab {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// The raw Philox4x32 bijection with 10 rounds.
PhiloxBlock philox4x32_10(PhiloxBlock counter, PhiloxKey key);

std::uint64_t splitmix64(std::uint64_t x);

/// Well-known experiment ids used to separate stream families.
enum class StreamFamily : std::uint64_t {
  kOneSample = 1,
  kTwoSample = 2,
  kLimitGaussian = 3,
  kLimitCoupled = 4,
  kExtremes = 5,
  kTesting = 99,
};

class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t experiment_id,
               std::uint64_t stream_index);
  RandomStream(std::uint64_t master_seed, StreamFamily family,
               std::uint64_t stream_index)
      : RandomStream(master_seed, static_cast<std::uint64_t>(family), stream_index) {}

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 52-bit resolution.
  double uniform();
  /// Standard normal by inversion of the uniform.
  double normal();
  /// Standard exponential.
  double exponential();
  /// Gamma(shape, 1) (Marsaglia-Tsang; boosted for shape < 1).
  double gamma(double shape);

  std::uint64_t stream_index() const { return stream_; }
  /// Number of 128-bit counter blocks consumed so far.
  std::uint64_t blocks_used() const { return block_; }
  /// The counter the next block will be generated from.
  PhiloxBlock next_counter() const;

 private:
  PhiloxKey key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

}  // namespace w2lab

#endif  // W2LAB_RNG_HPP_
