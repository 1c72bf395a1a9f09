// Copyright (c) 2026 pccse contributors
// SPDX-License-Identifier: Apache-2.0

// Writes the synthetic test corpus (mannequin, instances, sets, frames).

#include "testkit/testkit.hpp"

#include <cstdio>

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: fixgen <output-dir>\n");
        return 2;
    }
    try {
        pccse::testkit::write_corpus(argv[1]);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fixgen: %s\n", e.what());
        return 1;
    }
    std::printf("corpus written to %s\n", argv[1]);
    return 0;
}
