//
// Copyright 2026 The Onestep Authors
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

#include "onestep/randcore.h"

#include <string>
#include <utility>

#include "onestep/errors.h"

namespace onestep {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85;

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Sequential hash of (seed, path) with a per-lane salt.
std::uint64_t hash_path(std::uint64_t seed,
                        const std::vector<std::uint64_t>& path,
                        std::uint64_t salt) {
  std::uint64_t h = mix64(seed ^ salt);
  h = mix64(h + 0x9E3779B97F4A7C15ULL * (path.size() + 1));
  for (std::uint64_t p : path) {
    h = mix64(h ^ mix64(p + 0x632BE59BD9B4E019ULL));
  }
  return h;
}

// 53 random bits mapped to the midpoint grid of (0, 1); never 0 or 1.
double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                         std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kPhiloxM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kPhiloxM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

SeedStream::SeedStream(std::uint64_t master_seed,
                       std::vector<std::uint64_t> path)
    : master_seed_(master_seed), path_(std::move(path)) {
  const std::uint64_t k = hash_path(master_seed_, path_, 0x5EED0001ULL);
  key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  counter_hi_ = hash_path(master_seed_, path_, 0x5EED0002ULL);
}

double SeedStream::next_uniform() {
  const std::uint64_t block = cursor_ >> 1;
  if (block != cached_block_) {
    const auto out = philox4x32(
        {static_cast<std::uint32_t>(block),
         static_cast<std::uint32_t>(block >> 32),
         static_cast<std::uint32_t>(counter_hi_),
         static_cast<std::uint32_t>(counter_hi_ >> 32)},
        key_);
    cached_values_[0] =
        to_open_unit((std::uint64_t{out[0]} << 32) | std::uint64_t{out[1]});
    cached_values_[1] =
        to_open_unit((std::uint64_t{out[2]} << 32) | std::uint64_t{out[3]});
    cached_block_ = block;
  }
  return cached_values_[cursor_++ & 1];
}

SeedStream SeedStream::child(std::uint64_t purpose) const {
  std::vector<std::uint64_t> p = path_;
  p.push_back(purpose);
  return SeedStream(master_seed_, std::move(p));
}

SeedStream derive_stream(std::uint64_t master_seed,
                         std::span<const std::uint64_t> path) {
  return SeedStream(master_seed,
                    std::vector<std::uint64_t>(path.begin(), path.end()));
}

UniformBlock::UniformBlock(std::int64_t rows, std::int64_t cols,
                           std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows_ < 1 || cols_ < 1 ||
      values_.size() != static_cast<std::size_t>(rows_ * cols_)) {
    throw ArgumentError("UniformBlock: shape does not match value count");
  }
}

UniformBlock uniform_block(SeedStream& stream, std::int64_t n, std::int64_t k) {
  if (n < 1 || k < 1) {
    throw ArgumentError("uniform_block: n and k must be positive, got n=" +
                        std::to_string(n) + ", k=" + std::to_string(k));
  }
  std::vector<double> values(static_cast<std::size_t>(n * k));
  for (double& v : values) v = stream.next_uniform();
  return UniformBlock(n, k, std::move(values));
}

}  // namespace onestep
