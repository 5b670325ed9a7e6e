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

#include "sfl/ledger/commitment.h"

#include "sfl/common/error.h"

namespace sfl::ledger {

void WriteDataset(ByteWriter& w, const fl::Dataset& data) {
  w.U64(data.size()).U64(data.input_dim()).U64(data.class_count());
  w.F64Seq(data.features());
  w.U64(data.size());
  for (fl::Label y : data.labels()) w.U64(y);
}

Digest HashDataset(const fl::Dataset& data) {
  ByteWriter w;
  WriteDataset(w, data);
  return w.Hash();
}

Commitment CommitTestData(std::span<const fl::Dataset> groups,
                          std::span<const std::uint8_t> index_seed) {
  Require(!groups.empty(), ErrorCode::kEmptyInput, "no test data groups to commit");
  Commitment c;
  c.group_hashes.reserve(groups.size());
  for (const auto& g : groups) c.group_hashes.push_back(HashDataset(g));
  c.index_seed_hash = Sha256(index_seed);
  return c;
}

bool VerifyCommitment(std::span<const fl::Dataset> groups, const Commitment& commitment) {
  if (groups.size() != commitment.group_hashes.size()) return false;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (HashDataset(groups[i]) != commitment.group_hashes[i]) return false;
  }
  return true;
}

}  // namespace sfl::ledger
