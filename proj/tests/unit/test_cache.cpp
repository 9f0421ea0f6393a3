// SPDX-License-Identifier: Apache-2.0
//
// risnf: near-field RIS channel modelling and estimation library
// Copyright (C) 2026 The risnf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <fstream>

#include "doctest.h"
#include "risnf/cache.hpp"
#include "test_support.hpp"

using namespace risnf;

TEST_CASE("hashing")
{
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
    CHECK(hex64(1) == "0000000000000001");
}

TEST_CASE("cache hits, misses and corruption")
{
    set_diagnostics_enabled(false);
    const auto dir = test::scratch_dir("cache");
    Rng rng(41);
    const CMatrix value = test::random_matrix(5, 5, rng);
    int calls = 0;
    auto producer = [&]
    {
        ++calls;
        return value;
    };

    ArtifactCache cache(dir);
    CHECK(cache.get_or_compute("key seed=1", MatrixTag::Correlation, 0, producer) == value);
    CHECK(cache.get_or_compute("key seed=1", MatrixTag::Correlation, 0, producer) == value);
    CHECK(calls == 1);
    CHECK(cache.hits() == 1);
    CHECK(cache.misses() == 1);

    SUBCASE("changed key misses")
    {
        cache.get_or_compute("key seed=2", MatrixTag::Correlation, 0, producer);
        CHECK(calls == 2);
    }
    SUBCASE("kind mismatch recomputes")
    {
        cache.get_or_compute("key seed=1", MatrixTag::Correlation, 1, producer);
        CHECK(calls == 2);
    }
    SUBCASE("a fresh cache object reads the stored file")
    {
        ArtifactCache again(dir);
        CHECK(again.get_or_compute("key seed=1", MatrixTag::Correlation, 0, producer) == value);
        CHECK(calls == 1);
        CHECK(again.hits() == 1);
    }
    SUBCASE("truncated file is recomputed")
    {
        const auto path = cache.path_for("key seed=1", MatrixTag::Correlation);
        std::filesystem::resize_file(path, 20);
        CHECK(cache.get_or_compute("key seed=1", MatrixTag::Correlation, 0, producer) == value);
        CHECK(calls == 2);
        CHECK(std::filesystem::file_size(path) == matrix_file_size(5, 5));
    }
    std::filesystem::remove_all(dir);
    set_diagnostics_enabled(true);
}

TEST_CASE("disabled cache always computes")
{
    ArtifactCache cache;
    CHECK_FALSE(cache.enabled());
    int calls = 0;
    for (int i = 0; i < 3; ++i)
        cache.get_or_compute("k", MatrixTag::Impedance, 0, [&] { ++calls; return CMatrix::Identity(2, 2).eval(); });
    CHECK(calls == 3);
}
