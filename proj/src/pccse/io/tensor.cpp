// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#include "pccse/io/tensor.hpp"

#include <bit>
#include <cstring>
#include <fstream>

static_assert(std::endian::native == std::endian::little,
              "tensor payload IO assumes a little-endian host");

namespace pccse {

namespace {
constexpr char kMagic[4] = {'P', 'C', 'T', '1'};
constexpr uint8_t kMaxDims = 8;

size_t dtype_size(Tensor::DType d) {
    switch (d) {
    case Tensor::DType::f32: return 4;
    case Tensor::DType::f64: return 8;
    case Tensor::DType::u8: return 1;
    case Tensor::DType::u16: return 2;
    case Tensor::DType::u32: return 4;
    }
    return 0;
}
} // namespace

size_t Tensor::element_size() const { return dtype_size(dtype); }

size_t Tensor::element_count() const {
    size_t n = 1;
    for (uint32_t d : dims) n *= d;
    return dims.empty() ? 0 : n;
}

Tensor read_tensor(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot open tensor file", path);

    char magic[4];
    uint8_t dtype_byte = 0, ndim = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&dtype_byte), 1);
    in.read(reinterpret_cast<char*>(&ndim), 1);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw Error(ErrorCode::format, "not a PCT1 tensor file", path);
    if (dtype_size(Tensor::DType(dtype_byte)) == 0)
        throw Error(ErrorCode::format, "unknown tensor dtype " + std::to_string(dtype_byte), path);
    if (ndim == 0 || ndim > kMaxDims)
        throw Error(ErrorCode::format, "bad tensor rank " + std::to_string(ndim), path);

    Tensor t;
    t.dtype = Tensor::DType(dtype_byte);
    t.dims.resize(ndim);
    for (uint8_t i = 0; i < ndim; ++i) {
        uint8_t raw[4];
        in.read(reinterpret_cast<char*>(raw), 4);
        if (!in) throw Error(ErrorCode::format, "truncated tensor header", path);
        t.dims[i] = uint32_t(raw[0]) | uint32_t(raw[1]) << 8 | uint32_t(raw[2]) << 16 |
                    uint32_t(raw[3]) << 24;
    }
    const size_t payload = t.element_count() * t.element_size();
    t.bytes.resize(payload);
    in.read(reinterpret_cast<char*>(t.bytes.data()), std::streamsize(payload));
    if (!in || size_t(in.gcount()) != payload)
        throw Error(ErrorCode::format, "truncated tensor payload", path);
    char extra;
    if (in.read(&extra, 1))
        throw Error(ErrorCode::format, "trailing bytes after tensor payload", path);
    return t;
}

void write_tensor(const std::string& path, const Tensor& tensor) {
    if (tensor.dims.empty() || tensor.dims.size() > kMaxDims)
        throw Error(ErrorCode::invalid_argument, "bad tensor rank", path);
    if (tensor.bytes.size() != tensor.element_count() * tensor.element_size())
        throw Error(ErrorCode::invalid_argument, "tensor payload does not match dims", path);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot open tensor file for writing", path);
    out.write(kMagic, 4);
    const uint8_t dtype_byte = uint8_t(tensor.dtype);
    const uint8_t ndim = uint8_t(tensor.dims.size());
    out.write(reinterpret_cast<const char*>(&dtype_byte), 1);
    out.write(reinterpret_cast<const char*>(&ndim), 1);
    for (uint32_t d : tensor.dims) {
        const uint8_t raw[4] = {uint8_t(d), uint8_t(d >> 8), uint8_t(d >> 16), uint8_t(d >> 24)};
        out.write(reinterpret_cast<const char*>(raw), 4);
    }
    out.write(reinterpret_cast<const char*>(tensor.bytes.data()),
              std::streamsize(tensor.bytes.size()));
    if (!out) throw Error(ErrorCode::io, "failed writing tensor", path);
}

} // namespace pccse
