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
#include "risnf/errors.hpp"
#include "risnf/matrix_io.hpp"
#include "test_support.hpp"

using namespace risnf;

TEST_CASE("magic strings and sizes")
{
    CHECK(matrix_tag_magic(MatrixTag::Correlation) == "RNFC");
    CHECK(matrix_tag_magic(MatrixTag::Impedance) == "RNFZ");
    CHECK(matrix_tag_magic(MatrixTag::Coupling) == "RNFM");
    CHECK(matrix_tag_magic(MatrixTag::PhaseSchedule) == "RNFP");
    CHECK(correlation_kind_byte(CorrelationKind::ExactClustered) == 0);
    CHECK(correlation_kind_byte(CorrelationKind::Subspace) == 1);
    CHECK(matrix_file_size(3, 2) == 4 + 4 + 4 + 1 + 3 * 2 * 16);
}

TEST_CASE("round trip is bit exact")
{
    const auto dir = test::scratch_dir("matrix_io");
    Rng rng(1);
    const CMatrix m = test::random_matrix(5, 3, rng);
    const auto path = dir / "m.rnfc";
    write_matrix(path, MatrixTag::Correlation, 1, m);
    CHECK(std::filesystem::file_size(path) == matrix_file_size(5, 3));
    const StoredMatrix back = read_matrix(path);
    CHECK(back.tag == MatrixTag::Correlation);
    CHECK(back.kind == 1);
    CHECK(back.data == m);
    CHECK_FALSE(std::filesystem::exists(dir / "m.rnfc.tmp"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("corrupt files are Io errors")
{
    const auto dir = test::scratch_dir("matrix_io_bad");
    const CMatrix m = CMatrix::Identity(4, 4);
    const auto path = dir / "m.rnfz";
    write_matrix(path, MatrixTag::Impedance, 0, m);

    std::filesystem::resize_file(path, matrix_file_size(4, 4) - 7);
    try
    {
        read_matrix(path);
        FAIL("truncated file accepted");
    }
    catch (const Error &e)
    {
        CHECK(e.kind() == ErrorKind::Io);
    }

    {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f << "XXXX garbage";
    }
    CHECK_THROWS_AS(read_matrix(path), Error);
    CHECK_THROWS_AS(read_matrix(dir / "missing.rnfz"), Error);
    std::filesystem::remove_all(dir);
}
