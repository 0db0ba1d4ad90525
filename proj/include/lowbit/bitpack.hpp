/* Copyright 2026 The Lowbit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef LOWBIT_BITPACK_HPP_
#define LOWBIT_BITPACK_HPP_

#include <cstdint>
#include <vector>

#include "lowbit/error.hpp"
#include "lowbit/quant.hpp"
#include "lowbit/tensor.hpp"

namespace lowbit {

/// Bit-sliced, word-packed form of a low-bit integer tensor.
///
/// Plane p holds bit p of every encoded value. Within a word, lane i of the
/// pack axis occupies bit position (i mod W), LSB first, so lane index equals
/// bit index. Lanes past the logical lane count are zero in every plane.
/// Words are stored plane-major as [bits][outer][words_per_group] where
/// `outer` walks the non-pack axes in row-major order.
///
/// For HYBRID_BASELINE weights the complement planes (~word, masked to the
/// word width) are stored alongside, since weights are compile-time constants
/// and the baseline dot product consumes both polarities.
class BitplaneTensor {
 public:
  BitplaneTensor() = default;

  int bits() const { return bits_; }
  int word_width() const { return word_width_; }
  int pack_axis() const { return pack_axis_; }
  Scheme scheme() const { return scheme_; }
  int64_t logical_lanes() const { return lanes_; }
  int64_t outer() const { return outer_; }
  /// Words covering one group of `logical_lanes` lanes: ceil(K / W).
  int64_t words_per_group() const { return wpg_; }
  Layout origin_layout() const { return layout_; }
  const std::vector<int64_t>& logical_shape() const { return shape_; }

  const uint64_t* plane(int p) const { return words_.data() + p * outer_ * wpg_; }
  uint64_t* plane(int p) { return words_.data() + p * outer_ * wpg_; }
  bool has_complement() const { return !not_words_.empty(); }
  const uint64_t* complement_plane(int p) const {
    return not_words_.data() + p * outer_ * wpg_;
  }

  const std::vector<uint64_t>& words() const { return words_; }

  /// Size of the packed representation in bits, padding included.
  int64_t packed_bits() const { return bits_ * outer_ * wpg_ * word_width_; }

  uint64_t word_mask() const {
    return word_width_ == 64 ? ~uint64_t{0} : (uint64_t{1} << word_width_) - 1;
  }

  bool operator==(const BitplaneTensor& o) const {
    return bits_ == o.bits_ && word_width_ == o.word_width_ &&
           pack_axis_ == o.pack_axis_ && scheme_ == o.scheme_ &&
           lanes_ == o.lanes_ && shape_ == o.shape_ && layout_ == o.layout_ &&
           words_ == o.words_;
  }

  friend BitplaneTensor bitpack(const Tensor&, int, int, int, Scheme);
  friend BitplaneTensor bitpack_prepared(std::vector<uint64_t> words, int bits,
                                         int pack_axis, int word_width,
                                         Scheme scheme,
                                         std::vector<int64_t> shape,
                                         Layout layout);

 private:
  int bits_ = 0;
  int word_width_ = 64;
  int pack_axis_ = 0;
  Scheme scheme_ = Scheme::UNIPOLAR;
  int64_t lanes_ = 0;
  int64_t outer_ = 0;
  int64_t wpg_ = 0;
  std::vector<int64_t> shape_;
  Layout layout_ = Layout::FLAT;
  std::vector<uint64_t> words_;
  std::vector<uint64_t> not_words_;

  void build_complement() {
    const uint64_t mask = word_mask();
    not_words_.resize(words_.size());
    for (size_t i = 0; i < words_.size(); ++i) not_words_[i] = ~words_[i] & mask;
  }
};

/// Slices an integer tensor into bitplanes packed along `pack_axis`.
/// Values are first encoded per `scheme` (identity for UNIPOLAR,
/// two's-complement truncation for HYBRID_MSB, table codes for
/// HYBRID_BASELINE); out-of-range elements raise OutOfRange.
inline BitplaneTensor bitpack(const Tensor& q, int bits, int pack_axis,
                              int word_width, Scheme scheme) {
  if (q.dtype() != DType::I32)
    throw Error(ErrorCode::InvalidArgument, "bitpack expects an int tensor");
  if (word_width != 8 && word_width != 16 && word_width != 32 && word_width != 64)
    throw Error(ErrorCode::InvalidArgument, "word width must be 8/16/32/64");
  if (pack_axis < 0 || pack_axis >= q.rank())
    throw Error(ErrorCode::InvalidArgument, "pack axis out of range");

  const WeightCode code(scheme, bits);
  const auto& shape = q.shape();
  const int64_t lanes = shape[static_cast<size_t>(pack_axis)];
  const int64_t outer = lanes == 0 ? 0 : q.volume() / lanes;
  const int64_t wpg = (lanes + word_width - 1) / word_width;

  BitplaneTensor p;
  p.bits_ = bits;
  p.word_width_ = word_width;
  p.pack_axis_ = pack_axis;
  p.scheme_ = scheme;
  p.lanes_ = lanes;
  p.outer_ = outer;
  p.wpg_ = wpg;
  p.shape_ = shape;
  p.layout_ = q.layout();
  p.words_.assign(static_cast<size_t>(bits) * static_cast<size_t>(outer * wpg), 0);

  // inner = product of extents after the pack axis; the flat index then
  // decomposes as (pre * lanes + lane) * inner + post.
  int64_t inner = 1;
  for (int d = pack_axis + 1; d < q.rank(); ++d) inner *= shape[static_cast<size_t>(d)];

  auto src = q.i32();
  for (int64_t i = 0; i < q.volume(); ++i) {
    const int64_t post = i % inner;
    const int64_t lane = (i / inner) % lanes;
    const int64_t pre = i / (inner * lanes);
    const int64_t o = pre * inner + post;
    const uint32_t c = code.encode(src[static_cast<size_t>(i)]);
    const int64_t w = lane / word_width;
    const int bit = static_cast<int>(lane % word_width);
    for (int m = 0; m < bits; ++m)
      if ((c >> m) & 1u)
        p.plane(m)[o * wpg + w] |= uint64_t{1} << bit;
  }
  if (scheme == Scheme::HYBRID_BASELINE) p.build_complement();
  return p;
}

/// Assembles a BitplaneTensor from already-packed words (deserialization).
inline BitplaneTensor bitpack_prepared(std::vector<uint64_t> words, int bits,
                                       int pack_axis, int word_width,
                                       Scheme scheme, std::vector<int64_t> shape,
                                       Layout layout) {
  BitplaneTensor p;
  const int64_t lanes = shape.at(static_cast<size_t>(pack_axis));
  const int64_t volume = shape_volume(shape);
  const int64_t outer = volume / lanes;
  const int64_t wpg = (lanes + word_width - 1) / word_width;
  if (static_cast<int64_t>(words.size()) != bits * outer * wpg)
    throw Error(ErrorCode::ShapeMismatch, "packed word count mismatch");
  p.bits_ = bits;
  p.word_width_ = word_width;
  p.pack_axis_ = pack_axis;
  p.scheme_ = scheme;
  p.lanes_ = lanes;
  p.outer_ = outer;
  p.wpg_ = wpg;
  p.shape_ = std::move(shape);
  p.layout_ = layout;
  p.words_ = std::move(words);
  if (scheme == Scheme::HYBRID_BASELINE) p.build_complement();
  return p;
}

/// Reconstructs the encoded bit-pattern codes (not decoded signed values);
/// exact inverse of bitpack's bit assembly. Padding lanes are discarded.
inline Tensor bitunpack(const BitplaneTensor& p) {
  Tensor out = Tensor::zeros(DType::I32, p.logical_shape(), p.origin_layout());
  const auto& shape = p.logical_shape();
  const int64_t lanes = p.logical_lanes();
  const int64_t wpg = p.words_per_group();
  const int W = p.word_width();

  int64_t inner = 1;
  for (size_t d = static_cast<size_t>(p.pack_axis()) + 1; d < shape.size(); ++d)
    inner *= shape[d];

  auto dst = out.i32();
  for (int64_t i = 0; i < out.volume(); ++i) {
    const int64_t post = i % inner;
    const int64_t lane = (i / inner) % lanes;
    const int64_t pre = i / (inner * lanes);
    const int64_t o = pre * inner + post;
    const int64_t w = lane / W;
    const int bit = static_cast<int>(lane % W);
    uint32_t c = 0;
    for (int m = 0; m < p.bits(); ++m)
      c |= static_cast<uint32_t>((p.plane(m)[o * wpg + w] >> bit) & 1u) << m;
    dst[static_cast<size_t>(i)] = static_cast<int32_t>(c);
  }
  return out;
}

}  // namespace lowbit

#endif  // LOWBIT_BITPACK_HPP_
