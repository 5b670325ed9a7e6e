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


#include "sfl/harness/data.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <string>
#include <vector>

#include "sfl/common/error.h"
#include "sfl/common/rng.h"

namespace sfl::harness {

namespace {

std::vector<std::uint8_t> ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t BigEndian32(const std::vector<std::uint8_t>& b, std::size_t at,
                          const std::string& what) {
  Require(b.size() >= at + 4, ErrorCode::kParse, what + ": truncated header");
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) |
         (std::uint32_t{b[at + 2]} << 8) | std::uint32_t{b[at + 3]};
}

}  // namespace

fl::Dataset GenerateSynthetic(std::size_t classes, std::size_t per_class, std::size_t input_dim,
                              double separation, std::uint64_t seed) {
  Require(classes >= 1 && per_class >= 1 && input_dim >= 1, ErrorCode::kInvalidArgument,
          "synthetic dataset sizes must be positive");
  Require(std::isfinite(separation) && separation >= 0.0, ErrorCode::kInvalidArgument,
          "separation must be finite and >= 0");
  const double radius = separation / std::sqrt(2.0);
  std::vector<std::vector<double>> means(classes, std::vector<double>(input_dim, 0.0));
  RngStream mean_rng = RngStream::Derive(seed, "synthetic-means", 0);
  for (std::size_t c = 0; c < classes; ++c) {
    if (classes <= input_dim) {
      means[c][c] = radius;
      continue;
    }
    double norm = 0.0;
    for (double& v : means[c]) {
      v = mean_rng.NextGaussian();
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (double& v : means[c]) v = norm > 0.0 ? radius * v / norm : 0.0;
  }

  const std::size_t n = classes * per_class;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  RngStream rng = RngStream::Derive(seed, "synthetic-rows", 0);
  rng.Shuffle(std::span<std::size_t>(order));

  std::vector<double> features(n * input_dim);
  std::vector<fl::Label> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = order[i] / per_class;
    labels[i] = static_cast<fl::Label>(c);
    for (std::size_t j = 0; j < input_dim; ++j) {
      features[i * input_dim + j] = means[c][j] + rng.NextGaussian();
    }
  }
  return fl::Dataset(std::move(features), std::move(labels), input_dim, classes);
}

fl::Dataset LoadIdx(const std::filesystem::path& images, const std::filesystem::path& labels) {
  const std::vector<std::uint8_t> img = ReadAll(images);
  const std::vector<std::uint8_t> lab = ReadAll(labels);
  Require(BigEndian32(img, 0, "images") == 0x00000803, ErrorCode::kParse,
          "images: bad magic number");
  Require(BigEndian32(lab, 0, "labels") == 0x00000801, ErrorCode::kParse,
          "labels: bad magic number");
  const std::size_t count = BigEndian32(img, 4, "images");
  const std::size_t rows = BigEndian32(img, 8, "images");
  const std::size_t cols = BigEndian32(img, 12, "images");
  const std::size_t label_count = BigEndian32(lab, 4, "labels");
  Require(count == label_count, ErrorCode::kParse,
          "image count " + std::to_string(count) + " does not match label count " +
              std::to_string(label_count));
  const std::size_t dim = rows * cols;
  Require(dim >= 1, ErrorCode::kParse, "images: zero-sized rows");
  Require(img.size() == 16 + count * dim, ErrorCode::kParse,
          "images: body size does not match the header");
  Require(lab.size() == 8 + count, ErrorCode::kParse,
          "labels: body size does not match the header");

  std::vector<double> features(count * dim);
  for (std::size_t i = 0; i < features.size(); ++i) features[i] = img[16 + i] / 255.0;
  std::vector<fl::Label> ys(lab.begin() + 8, lab.end());
  const fl::Label max_label = ys.empty() ? 0 : *std::max_element(ys.begin(), ys.end());
  const std::size_t classes = std::max<std::size_t>(2, std::size_t{max_label} + 1);
  return fl::Dataset(std::move(features), std::move(ys), dim, classes);
}

}  // namespace sfl::harness
