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

#ifndef RISNF_MATRIX_IO_HPP
#define RISNF_MATRIX_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string_view>

#include "risnf/types.hpp"

namespace risnf
{
    // On-disk layout (little-endian):
    //   char[4] magic, u32 rows, u32 cols, u8 kind,
    //   rows*cols pairs of float64 (re, im) in row-major order.
    enum class MatrixTag
    {
        Correlation,   // "RNFC"
        Impedance,     // "RNFZ"
        Coupling,      // "RNFM"
        PhaseSchedule, // "RNFP"
    };

    std::string_view matrix_tag_magic(MatrixTag tag) noexcept;

    // Kind byte for correlation files; other tags use 0
    std::uint8_t correlation_kind_byte(CorrelationKind kind) noexcept;

    struct StoredMatrix
    {
        MatrixTag tag = MatrixTag::Correlation;
        std::uint8_t kind = 0;
        CMatrix data;
    };

    std::size_t matrix_file_size(Eigen::Index rows, Eigen::Index cols);

    // Writes through a temporary file and renames it into place
    void write_matrix(const std::filesystem::path &path, MatrixTag tag, std::uint8_t kind, const CMatrix &m);

    // Throws Error(Io) on missing files, unknown magic or a size mismatch
    StoredMatrix read_matrix(const std::filesystem::path &path);
}

#endif
