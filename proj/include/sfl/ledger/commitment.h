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

#ifndef SFL_LEDGER_COMMITMENT_H_
#define SFL_LEDGER_COMMITMENT_H_

#include <cstdint>
#include <span>
#include <vector>

#include "sfl/common/digest.h"
#include "sfl/fl/dataset.h"

namespace sfl::ledger {

// Hash commitment over the publisher's held-out test data groups.
struct Commitment {
  std::vector<Digest> group_hashes;
  Digest index_seed_hash{};

  bool operator==(const Commitment&) const = default;
};

// u64 rows, u64 input_dim, u64 class_count, f64 sequence of features, then
// the labels as a length-prefixed u64 sequence.
void WriteDataset(ByteWriter& w, const fl::Dataset& data);
Digest HashDataset(const fl::Dataset& data);

// Throws kEmptyInput for an empty group list.
Commitment CommitTestData(std::span<const fl::Dataset> groups,
                          std::span<const std::uint8_t> index_seed);

// True iff the group count matches and every group hashes to its committed
// digest, in order.
bool VerifyCommitment(std::span<const fl::Dataset> groups, const Commitment& commitment);

}  // namespace sfl::ledger

#endif  // SFL_LEDGER_COMMITMENT_H_
