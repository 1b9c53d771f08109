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

#include "fractonlab/rng.h"

#include <stdexcept>

namespace fractonlab {

namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85;

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key) {
    for (int round = 0; round < 10; round++) {
        uint64_t p0 = uint64_t{kPhiloxM0} * ctr[0];
        uint64_t p1 = uint64_t{kPhiloxM1} * ctr[2];
        auto hi0 = (uint32_t)(p0 >> 32);
        auto lo0 = (uint32_t)p0;
        auto hi1 = (uint32_t)(p1 >> 32);
        auto lo1 = (uint32_t)p1;
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

uint64_t mix_key(std::initializer_list<uint64_t> words) {
    uint64_t h = 0x6A09E667F3BCC908ULL;
    for (uint64_t w : words) {
        h = splitmix64(h ^ splitmix64(w));
    }
    return h;
}

RandomStream::RandomStream(uint64_t key, uint64_t stream) {
    state_.key = key;
    state_.stream = stream;
}

RandomStream RandomStream::for_purpose(
    uint64_t seed, uint64_t realization, uint64_t replica, StreamPurpose purpose) {
    return RandomStream(mix_key({seed, realization}), (replica << 8) | (uint64_t)purpose);
}

void RandomStream::refill() {
    std::array<uint32_t, 4> ctr{
        (uint32_t)state_.counter,
        (uint32_t)(state_.counter >> 32),
        (uint32_t)state_.stream,
        (uint32_t)(state_.stream >> 32),
    };
    std::array<uint32_t, 2> key{(uint32_t)state_.key, (uint32_t)(state_.key >> 32)};
    state_.buffer = philox4x32_10(ctr, key);
    state_.counter++;
    state_.lane = 0;
}

uint32_t RandomStream::next_u32() {
    if (state_.lane >= 4) {
        refill();
    }
    return state_.buffer[state_.lane++];
}

uint64_t RandomStream::next_u64() {
    uint64_t hi = next_u32();
    uint64_t lo = next_u32();
    return (hi << 32) | lo;
}

double RandomStream::uniform() {
    return (double)(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t RandomStream::below(uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("RandomStream::below requires a positive bound.");
    }
    // Rejection on the top of the range keeps every residue equally likely.
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    while (true) {
        uint64_t r = next_u64();
        if (r < limit) {
            return r % bound;
        }
    }
}

bool RandomStream::bernoulli(double p) {
    if (p <= 0) {
        return false;
    }
    if (p >= 1) {
        return true;
    }
    return uniform() < p;
}

}  // namespace fractonlab
