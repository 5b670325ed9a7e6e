// Copyright 2026 The SFL Authors.
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


#ifndef SFL_HARNESS_DATA_H_
#define SFL_HARNESS_DATA_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>

#include "sfl/fl/dataset.h"

namespace sfl::harness {

// Unit-variance Gaussian clusters, `per_class` rows per label, in shuffled
// order. Cluster means sit `separation` apart pairwise: sep/sqrt(2) along a
// distinct basis vector when classes <= input_dim, otherwise on random unit
// directions scaled the same way.
fl::Dataset GenerateSynthetic(std::size_t classes, std::size_t per_class, std::size_t input_dim,
                              double separation, std::uint64_t seed);

// An IDX image file (magic 0x00000803, big-endian count, rows, cols, one
// unsigned byte per pixel) with its IDX label file (magic 0x00000801).
// Pixels are scaled by 1/255. The class count is max label + 1, at least 2.
// Throws kIo if a file cannot be opened and kParse on a bad magic, a
// truncated body, or mismatched counts.
fl::Dataset LoadIdx(const std::filesystem::path& images, const std::filesystem::path& labels);

}  // namespace sfl::harness

#endif  // SFL_HARNESS_DATA_H_
