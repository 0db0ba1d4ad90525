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
#ifndef LOWBIT_TENSOR_HPP_
#define LOWBIT_TENSOR_HPP_

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lowbit/error.hpp"

namespace lowbit {

/// Memory layouts understood by the engine. The 4-D tags name their axes;
/// FLAT is a plain row-major array of any rank.
enum class Layout { NHWC, HWIO, NCHW, OIHW, FLAT };

enum class DType { F32, I32 };

inline const char* layout_name(Layout l) {
  switch (l) {
    case Layout::NHWC: return "NHWC";
    case Layout::HWIO: return "HWIO";
    case Layout::NCHW: return "NCHW";
    case Layout::OIHW: return "OIHW";
    case Layout::FLAT: return "FLAT";
  }
  return "?";
}

inline Layout layout_from_name(const std::string& s) {
  if (s == "NHWC") return Layout::NHWC;
  if (s == "HWIO") return Layout::HWIO;
  if (s == "NCHW") return Layout::NCHW;
  if (s == "OIHW") return Layout::OIHW;
  if (s == "FLAT") return Layout::FLAT;
  throw Error(ErrorCode::ParseError, "unknown layout '" + s + "'");
}

/// Axis letters of a 4-D layout tag, in storage order.
inline const char* layout_axes(Layout l) {
  switch (l) {
    case Layout::NHWC: return "NHWC";
    case Layout::HWIO: return "HWIO";
    case Layout::NCHW: return "NCHW";
    case Layout::OIHW: return "OIHW";
    case Layout::FLAT: return "";
  }
  return "";
}

inline const char* dtype_name(DType d) { return d == DType::F32 ? "f32" : "i32"; }

inline DType dtype_from_name(const std::string& s) {
  if (s == "f32") return DType::F32;
  if (s == "i32") return DType::I32;
  throw Error(ErrorCode::ParseError, "unknown dtype '" + s + "'");
}

inline int64_t shape_volume(const std::vector<int64_t>& shape) {
  int64_t v = 1;
  for (int64_t e : shape) v *= e;
  return v;
}

/// Dense N-dimensional array of float32 or int32 values with an explicit
/// layout tag. Immutable by convention once built; operations return new
/// tensors.
class Tensor {
 public:
  Tensor() : layout_(Layout::FLAT), data_(std::vector<float>{}) {}

  static Tensor zeros(DType dtype, std::vector<int64_t> shape, Layout layout) {
    Tensor t;
    t.shape_ = std::move(shape);
    t.layout_ = layout;
    const auto n = static_cast<size_t>(shape_volume(t.shape_));
    if (dtype == DType::F32)
      t.data_ = std::vector<float>(n, 0.0f);
    else
      t.data_ = std::vector<int32_t>(n, 0);
    t.check_invariants();
    return t;
  }

  static Tensor from_f32(std::vector<float> values, std::vector<int64_t> shape,
                         Layout layout) {
    Tensor t;
    t.shape_ = std::move(shape);
    t.layout_ = layout;
    t.data_ = std::move(values);
    t.check_invariants();
    return t;
  }

  static Tensor from_i32(std::vector<int32_t> values, std::vector<int64_t> shape,
                         Layout layout) {
    Tensor t;
    t.shape_ = std::move(shape);
    t.layout_ = layout;
    t.data_ = std::move(values);
    t.check_invariants();
    return t;
  }

  DType dtype() const {
    return std::holds_alternative<std::vector<float>>(data_) ? DType::F32
                                                             : DType::I32;
  }
  const std::vector<int64_t>& shape() const { return shape_; }
  Layout layout() const { return layout_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int64_t volume() const { return shape_volume(shape_); }
  int64_t dim(int i) const { return shape_.at(static_cast<size_t>(i)); }

  std::span<const float> f32() const {
    return {std::get<std::vector<float>>(data_)};
  }
  std::span<float> f32() { return {std::get<std::vector<float>>(data_)}; }
  std::span<const int32_t> i32() const {
    return {std::get<std::vector<int32_t>>(data_)};
  }
  std::span<int32_t> i32() { return {std::get<std::vector<int32_t>>(data_)}; }

  /// Flat offset of 4-D coordinates in storage order.
  int64_t index4(int64_t a, int64_t b, int64_t c, int64_t d) const {
    return ((a * shape_[1] + b) * shape_[2] + c) * shape_[3] + d;
  }

  /// Same content with a different tag; shape volume must be unchanged.
  Tensor reshaped(std::vector<int64_t> shape, Layout layout) const {
    if (shape_volume(shape) != volume())
      throw Error(ErrorCode::ShapeMismatch, "reshape changes element count");
    Tensor t = *this;
    t.shape_ = std::move(shape);
    t.layout_ = layout;
    t.check_invariants();
    return t;
  }

  bool same_values(const Tensor& o) const {
    return dtype() == o.dtype() && shape_ == o.shape_ && layout_ == o.layout_ &&
           data_ == o.data_;
  }

 private:
  void check_invariants() const {
    for (int64_t e : shape_)
      if (e < 0) throw Error(ErrorCode::ShapeMismatch, "negative extent");
    const auto n = static_cast<size_t>(shape_volume(shape_));
    const size_t have = dtype() == DType::F32
                            ? std::get<std::vector<float>>(data_).size()
                            : std::get<std::vector<int32_t>>(data_).size();
    if (have != n)
      throw Error(ErrorCode::ShapeMismatch,
                  "element count " + std::to_string(have) +
                      " does not match shape volume " + std::to_string(n));
    if (layout_ != Layout::FLAT && rank() != 4)
      throw Error(ErrorCode::IncompatibleLayout,
                  std::string("layout ") + layout_name(layout_) +
                      " requires rank 4, got rank " + std::to_string(rank()));
  }

  std::vector<int64_t> shape_;
  Layout layout_;
  std::variant<std::vector<float>, std::vector<int32_t>> data_;
};

/// Materializes the tensor in the target 4-D layout by permuting axes with
/// matching letters. A no-op copy when the tensor is already in the target
/// layout.
inline Tensor transform_layout(const Tensor& t, Layout target) {
  if (t.layout() == target) return t;
  const std::string src_axes = layout_axes(t.layout());
  const std::string dst_axes = layout_axes(target);
  if (src_axes.empty() || dst_axes.empty() || t.rank() != 4)
    throw Error(ErrorCode::IncompatibleLayout,
                std::string("cannot transform ") + layout_name(t.layout()) +
                    " to " + layout_name(target));
  {
    std::string a = src_axes, b = dst_axes;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b)
      throw Error(ErrorCode::IncompatibleLayout,
                  std::string("axis sets differ: ") + layout_name(t.layout()) +
                      " vs " + layout_name(target));
  }

  // perm[d] = source axis position that supplies target axis d
  int perm[4];
  for (int d = 0; d < 4; ++d)
    perm[d] = static_cast<int>(src_axes.find(dst_axes[static_cast<size_t>(d)]));

  std::vector<int64_t> dst_shape(4);
  for (int d = 0; d < 4; ++d) dst_shape[static_cast<size_t>(d)] = t.dim(perm[d]);

  Tensor out = Tensor::zeros(t.dtype(), dst_shape, target);
  const auto& s = t.shape();
  const int64_t sstr3 = 1;
  const int64_t sstr2 = s[3];
  const int64_t sstr1 = s[2] * sstr2;
  const int64_t sstr0 = s[1] * sstr1;
  const int64_t sstr[4] = {sstr0, sstr1, sstr2, sstr3};

  auto copy_all = [&](auto src, auto dst) {
    int64_t di = 0;
    int64_t c[4];
    for (c[0] = 0; c[0] < dst_shape[0]; ++c[0])
      for (c[1] = 0; c[1] < dst_shape[1]; ++c[1])
        for (c[2] = 0; c[2] < dst_shape[2]; ++c[2])
          for (c[3] = 0; c[3] < dst_shape[3]; ++c[3]) {
            const int64_t si = c[0] * sstr[perm[0]] + c[1] * sstr[perm[1]] +
                               c[2] * sstr[perm[2]] + c[3] * sstr[perm[3]];
            dst[static_cast<size_t>(di++)] = src[static_cast<size_t>(si)];
          }
  };
  if (t.dtype() == DType::F32)
    copy_all(t.f32(), out.f32());
  else
    copy_all(t.i32(), out.i32());
  return out;
}

}  // namespace lowbit

#endif  // LOWBIT_TENSOR_HPP_
