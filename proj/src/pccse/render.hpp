// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pccse/assign.hpp"
#include "pccse/io/png_io.hpp"
#include "pccse/types.hpp"

namespace pccse {

// UV visualization: red = 255u, green = 255v (rounded), blue = 128 on
// foreground; background is black.
Rgb8 render_uv(const UvMap& uv, const CanonicalMesh& mesh);

} // namespace pccse
