// Copyright 2026 The Fractonlab Authors
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

#ifndef _FRACTONLAB_RNG_H
#define _FRACTONLAB_RNG_H

#include <array>
#include <cstdint>
#include <initializer_list>

namespace fractonlab {

/// Purposes a stream can be drawn for. Part of the stream key, so the
/// disorder of realization 3 never shares numbers with replica 0 of
/// realization 3.
enum class StreamPurpose : uint8_t {
    kDisorder = 1,
    kReplica = 2,
    kSwap = 3,
    kPilot = 4,
    kGeneric = 5,
};

/// Mixes a list of words into one 64 bit key (splitmix64 finalizer chain).
uint64_t mix_key(std::initializer_list<uint64_t> words);

/// Counter-based Philox4x32-10 stream.
///
/// The stream is fully described by (key, stream id, counter, buffered
/// lane), which makes it trivially serializable and independent of thread
/// scheduling: the i-th number of a stream depends only on its identity.
class RandomStream {
   public:
    struct State {
        uint64_t key = 0;
        uint64_t stream = 0;
        uint64_t counter = 0;
        uint32_t lane = 4;
        std::array<uint32_t, 4> buffer{};
        bool operator==(const State &other) const = default;
    };

    RandomStream() = default;
    RandomStream(uint64_t key, uint64_t stream);

    /// Stream keyed by (seed, realization) and tagged by (replica, purpose).
    static RandomStream for_purpose(uint64_t seed, uint64_t realization, uint64_t replica, StreamPurpose purpose);

    uint32_t next_u32();
    uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer in [0, bound). bound must be > 0.
    uint64_t below(uint64_t bound);
    bool bernoulli(double p);

    const State &state() const {
        return state_;
    }
    void set_state(const State &s) {
        state_ = s;
    }
    bool operator==(const RandomStream &other) const = default;

   private:
    void refill();
    State state_;
};

/// Single Philox4x32 block with 10 rounds. Exposed for known-answer tests.
std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> counter, std::array<uint32_t, 2> key);

}  // namespace fractonlab

#endif
