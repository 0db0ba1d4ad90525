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
#ifndef LOWBIT_QUANT_HPP_
#define LOWBIT_QUANT_HPP_

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lowbit/error.hpp"
#include "lowbit/tensor.hpp"

namespace lowbit {

/// Weight/activation encodings. Activations are always UNIPOLAR; weights may
/// additionally use one of the two signed hybrid encodings.
///
///   UNIPOLAR         code b          -> sum_m 2^m b_m, in [0, 2^M-1]
///   HYBRID_BASELINE  code b          -> sum_m 2^m (2 b_m - 1), odd values in
///                                       [-(2^M-1), 2^M-1]; zero not encodable
///   HYBRID_MSB       two's complement-> -2^(M-1) b_{M-1} + sum_{m<M-1} 2^m b_m,
///                                       in [-2^(M-1), 2^(M-1)-1]; zero encodable
enum class Scheme { UNIPOLAR, HYBRID_BASELINE, HYBRID_MSB, FLOAT32 };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::UNIPOLAR: return "unipolar";
    case Scheme::HYBRID_BASELINE: return "hybrid_baseline";
    case Scheme::HYBRID_MSB: return "hybrid_msb";
    case Scheme::FLOAT32: return "float32";
  }
  return "?";
}

inline Scheme scheme_from_name(const std::string& s) {
  if (s == "unipolar") return Scheme::UNIPOLAR;
  if (s == "hybrid_baseline") return Scheme::HYBRID_BASELINE;
  if (s == "hybrid_msb") return Scheme::HYBRID_MSB;
  if (s == "float32") return Scheme::FLOAT32;
  throw Error(ErrorCode::ParseError, "unknown scheme '" + s + "'");
}

/// Per-layer quantization parameters.
struct QuantSpec {
  int a_bits = 2;
  int w_bits = 2;
  Scheme scheme = Scheme::FLOAT32;
  double a_scale = 1.0;
  double w_scale = 1.0;

  bool is_float() const { return scheme == Scheme::FLOAT32; }

  void validate() const {
    if (scheme == Scheme::FLOAT32) return;
    if (a_bits < 1 || a_bits > 4 || w_bits < 1 || w_bits > 4)
      throw Error(ErrorCode::UnsupportedBits,
                  "bit widths must lie in [1,4], got a_bits=" +
                      std::to_string(a_bits) + " w_bits=" + std::to_string(w_bits));
    if (!(a_scale > 0.0) || !std::isfinite(a_scale) || !(w_scale > 0.0) ||
        !std::isfinite(w_scale))
      throw Error(ErrorCode::InvalidArgument, "scales must be positive and finite");
  }
};

/// Decode/encode table between M-bit patterns and the signed integer values
/// of one encoding scheme.
struct WeightCode {
  Scheme scheme;
  int bits;

  WeightCode(Scheme s, int m) : scheme(s), bits(m) {
    if (s == Scheme::FLOAT32)
      throw Error(ErrorCode::UnsupportedScheme, "float32 has no weight code");
    if (m < 1 || m > 8)
      throw Error(ErrorCode::UnsupportedBits, "code bits out of range");
  }

  uint32_t code_mask() const { return (1u << bits) - 1u; }

  int32_t min_value() const {
    switch (scheme) {
      case Scheme::UNIPOLAR: return 0;
      case Scheme::HYBRID_MSB: return -(1 << (bits - 1));
      case Scheme::HYBRID_BASELINE: return -((1 << bits) - 1);
      default: return 0;
    }
  }

  int32_t max_value() const {
    switch (scheme) {
      case Scheme::UNIPOLAR: return (1 << bits) - 1;
      case Scheme::HYBRID_MSB: return (1 << (bits - 1)) - 1;
      case Scheme::HYBRID_BASELINE: return (1 << bits) - 1;
      default: return 0;
    }
  }

  int32_t decode(uint32_t code) const {
    code &= code_mask();
    switch (scheme) {
      case Scheme::UNIPOLAR:
        return static_cast<int32_t>(code);
      case Scheme::HYBRID_MSB: {
        const int32_t c = static_cast<int32_t>(code);
        return c < (1 << (bits - 1)) ? c : c - (1 << bits);
      }
      case Scheme::HYBRID_BASELINE:
        // sum_m 2^m (2 b_m - 1) == 2*code - (2^M - 1)
        return 2 * static_cast<int32_t>(code) - ((1 << bits) - 1);
      default:
        return 0;
    }
  }

  bool representable(int32_t value) const {
    if (value < min_value() || value > max_value()) return false;
    if (scheme == Scheme::HYBRID_BASELINE && (value % 2) == 0) return false;
    return true;
  }

  uint32_t encode(int32_t value) const {
    if (!representable(value))
      throw Error(ErrorCode::OutOfRange,
                  std::to_string(value) + " not encodable as " +
                      std::to_string(bits) + "-bit " + scheme_name(scheme));
    switch (scheme) {
      case Scheme::UNIPOLAR:
        return static_cast<uint32_t>(value);
      case Scheme::HYBRID_MSB:
        // two's-complement truncation to `bits` bits
        return static_cast<uint32_t>(value) & code_mask();
      case Scheme::HYBRID_BASELINE:
        return static_cast<uint32_t>((value + ((1 << bits) - 1)) / 2);
      default:
        return 0;
    }
  }

  /// Decode table over all 2^M codes, indexed by code.
  std::vector<int32_t> values() const {
    std::vector<int32_t> v(static_cast<size_t>(1) << bits);
    for (uint32_t c = 0; c < v.size(); ++c) v[c] = decode(c);
    return v;
  }
};

namespace detail {

inline constexpr double kGridTolerance = 1e-4;

// Rounds x to the nearest integer and checks it sits within the fake-quant
// tolerance of that integer.
inline int64_t snap_to_grid(double x, int64_t flat_index) {
  const double r = std::nearbyint(x);
  if (std::abs(x - r) > kGridTolerance || !std::isfinite(x))
    throw Error(ErrorCode::NotOnGrid,
                "element " + std::to_string(flat_index) + " (" +
                    std::to_string(x) + " after scaling) is off the grid");
  return static_cast<int64_t>(r);
}

}  // namespace detail

/// Casts a fake-quantized float tensor to its integer codes: q[i] =
/// round(t[i]/scale). Every element must already lie on the (bits, signed)
/// grid within tolerance.
inline Tensor quantize(const Tensor& t, double scale, int bits, bool is_signed) {
  if (t.dtype() != DType::F32)
    throw Error(ErrorCode::InvalidArgument, "quantize expects a float tensor");
  const int64_t lo = is_signed ? -(int64_t{1} << (bits - 1)) : 0;
  const int64_t hi = is_signed ? (int64_t{1} << (bits - 1)) - 1
                               : (int64_t{1} << bits) - 1;
  Tensor out = Tensor::zeros(DType::I32, t.shape(), t.layout());
  auto src = t.f32();
  auto dst = out.i32();
  for (size_t i = 0; i < src.size(); ++i) {
    const int64_t q = detail::snap_to_grid(src[i] / scale, static_cast<int64_t>(i));
    if (q < lo || q > hi)
      throw Error(ErrorCode::RangeExceeded,
                  std::to_string(q) + " outside [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "] at element " + std::to_string(i));
    dst[i] = static_cast<int32_t>(q);
  }
  return out;
}

/// Scheme-aware variant used on weight tensors: the representable grid comes
/// from the encoding's decode table, so HYBRID_BASELINE rejects zero and all
/// even values as off-grid.
inline Tensor quantize_on_grid(const Tensor& t, double scale, int bits,
                               Scheme scheme) {
  if (scheme == Scheme::UNIPOLAR) return quantize(t, scale, bits, false);
  if (scheme == Scheme::HYBRID_MSB) return quantize(t, scale, bits, true);
  if (scheme != Scheme::HYBRID_BASELINE)
    throw Error(ErrorCode::UnsupportedScheme, "cannot quantize for float32");
  if (t.dtype() != DType::F32)
    throw Error(ErrorCode::InvalidArgument, "quantize expects a float tensor");
  const WeightCode code(scheme, bits);
  Tensor out = Tensor::zeros(DType::I32, t.shape(), t.layout());
  auto src = t.f32();
  auto dst = out.i32();
  for (size_t i = 0; i < src.size(); ++i) {
    const int64_t q = detail::snap_to_grid(src[i] / scale, static_cast<int64_t>(i));
    if (q < code.min_value() || q > code.max_value())
      throw Error(ErrorCode::RangeExceeded,
                  std::to_string(q) + " outside hybrid_baseline range at element " +
                      std::to_string(i));
    if ((q % 2) == 0)
      throw Error(ErrorCode::NotOnGrid,
                  "hybrid_baseline cannot represent even value " +
                      std::to_string(q) + " at element " + std::to_string(i));
    dst[i] = static_cast<int32_t>(q);
  }
  return out;
}

/// Element-wise q[i] * scale back to float.
inline Tensor dequantize(const Tensor& q, double scale) {
  if (q.dtype() != DType::I32)
    throw Error(ErrorCode::InvalidArgument, "dequantize expects an int tensor");
  Tensor out = Tensor::zeros(DType::F32, q.shape(), q.layout());
  auto src = q.i32();
  auto dst = out.f32();
  for (size_t i = 0; i < src.size(); ++i)
    dst[i] = static_cast<float>(src[i] * scale);
  return out;
}

}  // namespace lowbit

#endif  // LOWBIT_QUANT_HPP_
