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

#ifndef ONESTEP_RANDCORE_H_
#define ONESTEP_RANDCORE_H_

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace onestep {

// Default master seed used by the CLI when --seed is not given.
inline constexpr std::uint64_t kDefaultMasterSeed = 20240;

// Philox4x32-10 counter-based block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                         std::array<std::uint32_t, 2> key);

// A replayable source of uniform variates on the open interval (0, 1).
//
// The stream is identified by (master_seed, path). The path is hashed into a
// Philox key and the high half of the counter; the low half of the counter is
// the block index. Two streams with equal identity produce equal sequences,
// and distinct paths select disjoint counter spaces, so deriving a stream is
// O(1) and never overlaps another.
//
// A stream is single-owner. Distinct streams may be used on distinct threads.
class SeedStream {
 public:
  SeedStream(std::uint64_t master_seed, std::vector<std::uint64_t> path);

  // Next uniform in (0, 1); advances the cursor by one.
  double next_uniform();

  // Restores the exact sequence from position 0.
  void rewind() { cursor_ = 0; }

  // Repositions the stream; next_uniform() then returns the value at `pos`.
  void seek(std::uint64_t pos) { cursor_ = pos; }

  // Stream whose path is this path with `purpose` appended. Independent of
  // this stream's cursor.
  SeedStream child(std::uint64_t purpose) const;

  std::uint64_t master_seed() const { return master_seed_; }
  const std::vector<std::uint64_t>& path() const { return path_; }
  std::uint64_t cursor() const { return cursor_; }

 private:
  std::uint64_t master_seed_;
  std::vector<std::uint64_t> path_;
  std::uint64_t cursor_ = 0;
  std::array<std::uint32_t, 2> key_;
  std::uint64_t counter_hi_;
  // Cache of the last generated Philox block (two uniforms).
  std::uint64_t cached_block_ = ~std::uint64_t{0};
  std::array<double, 2> cached_values_{};
};

SeedStream derive_stream(std::uint64_t master_seed,
                         std::span<const std::uint64_t> path);

inline SeedStream derive_stream(std::uint64_t master_seed,
                                std::initializer_list<std::uint64_t> path) {
  return SeedStream(master_seed, std::vector<std::uint64_t>(path));
}

// An n x k block of uniforms: row i carries the k uniforms consumed by
// observation i. Stored row-major.
class UniformBlock {
 public:
  UniformBlock(std::int64_t rows, std::int64_t cols, std::vector<double> values);

  std::int64_t rows() const { return rows_; }
  std::int64_t cols() const { return cols_; }
  double operator()(std::int64_t i, std::int64_t j) const {
    return values_[static_cast<std::size_t>(i * cols_ + j)];
  }
  std::span<const double> row(std::int64_t i) const {
    return {values_.data() + i * cols_, static_cast<std::size_t>(cols_)};
  }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const UniformBlock&, const UniformBlock&) = default;

 private:
  std::int64_t rows_;
  std::int64_t cols_;
  std::vector<double> values_;
};

// Draws n*k uniforms from `stream` (advancing its cursor) into a block.
// Throws ArgumentError if n < 1 or k < 1.
UniformBlock uniform_block(SeedStream& stream, std::int64_t n, std::int64_t k);

}  // namespace onestep

#endif  // ONESTEP_RANDCORE_H_
