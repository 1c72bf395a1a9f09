// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

#include "pccse/render.hpp"

#include <cmath>

namespace pccse {

Rgb8 render_uv(const UvMap& uv, const CanonicalMesh& mesh) {
    Rgb8 image(uv.width, uv.height, {0, 0, 0});
    for (uint32_t y = 0; y < uv.height; ++y) {
        for (uint32_t x = 0; x < uv.width; ++x) {
            const uint32_t v = uv.vertex_at(x, y);
            if (v == UvMap::no_vertex) continue;
            if (v >= mesh.uv.size())
                throw Error(ErrorCode::precondition,
                            "uv map references vertex " + std::to_string(v) +
                                " beyond mesh uv table");
            const auto& tex = mesh.uv[v];
            image.at(x, y) = {uint8_t(std::lround(255.0 * tex[0])),
                              uint8_t(std::lround(255.0 * tex[1])), 128};
        }
    }
    return image;
}

} // namespace pccse
