// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pccse/types.hpp"

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

namespace pccse {

// Flat binary tensor container. Layout, all little-endian:
//   bytes 0..3   magic "PCT1"
//   byte  4      dtype (1=f32, 2=f64, 3=u8, 4=u16, 5=u32)
//   byte  5      ndim
//   6..          ndim u32 dims, then the row-major payload
struct Tensor {
    enum class DType : uint8_t { f32 = 1, f64 = 2, u8 = 3, u16 = 4, u32 = 5 };

    DType dtype = DType::f32;
    std::vector<uint32_t> dims;
    std::vector<uint8_t> bytes;

    size_t element_size() const;
    size_t element_count() const;
};

template <typename T> constexpr Tensor::DType dtype_of();
template <> constexpr Tensor::DType dtype_of<float>() { return Tensor::DType::f32; }
template <> constexpr Tensor::DType dtype_of<double>() { return Tensor::DType::f64; }
template <> constexpr Tensor::DType dtype_of<uint8_t>() { return Tensor::DType::u8; }
template <> constexpr Tensor::DType dtype_of<uint16_t>() { return Tensor::DType::u16; }
template <> constexpr Tensor::DType dtype_of<uint32_t>() { return Tensor::DType::u32; }

Tensor read_tensor(const std::string& path);
void write_tensor(const std::string& path, const Tensor& tensor);

template <typename T>
Tensor make_tensor(std::vector<uint32_t> dims, const T* values, size_t count) {
    Tensor t;
    t.dtype = dtype_of<T>();
    t.dims = std::move(dims);
    if (t.element_count() != count)
        throw Error(ErrorCode::invalid_argument, "tensor dims do not match value count");
    t.bytes.resize(count * sizeof(T));
    std::memcpy(t.bytes.data(), values, t.bytes.size());
    return t;
}

template <typename T>
const T* tensor_data(const Tensor& t, const std::string& context = {}) {
    if (t.dtype != dtype_of<T>())
        throw Error(ErrorCode::format, "unexpected tensor dtype", context);
    return reinterpret_cast<const T*>(t.bytes.data());
}

} // namespace pccse
