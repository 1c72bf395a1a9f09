// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pccse/types.hpp"

#include <array>
#include <string>

namespace pccse {

using Rgb8 = Raster<std::array<uint8_t, 3>>;

// 8-bit grayscale; color or 16-bit inputs are reduced on read.
Mask read_gray8_png(const std::string& path);
void write_gray8_png(const std::string& path, const Mask& image);

// Written with fixed filter and compression settings and no ancillary
// chunks, so equal pixels give equal bytes.
void write_rgb8_png(const std::string& path, const Rgb8& image);

} // namespace pccse
