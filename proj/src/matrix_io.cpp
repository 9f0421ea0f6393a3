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

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "risnf/errors.hpp"
#include "risnf/matrix_io.hpp"

namespace risnf
{
    static_assert(std::endian::native == std::endian::little, "matrix files assume a little-endian host");

    namespace
    {
        constexpr std::size_t header_size = 4 + 4 + 4 + 1;

        constexpr std::array<MatrixTag, 4> all_tags = {MatrixTag::Correlation, MatrixTag::Impedance, MatrixTag::Coupling,
                                                       MatrixTag::PhaseSchedule};

        template <typename T>
        void put(std::vector<char> &buf, T value)
        {
            const auto *p = reinterpret_cast<const char *>(&value);
            buf.insert(buf.end(), p, p + sizeof(T));
        }

        template <typename T>
        T get(const std::vector<char> &buf, std::size_t offset)
        {
            T value;
            std::memcpy(&value, buf.data() + offset, sizeof(T));
            return value;
        }
    }

    std::string_view matrix_tag_magic(MatrixTag tag) noexcept
    {
        switch (tag)
        {
        case MatrixTag::Correlation:
            return "RNFC";
        case MatrixTag::Impedance:
            return "RNFZ";
        case MatrixTag::Coupling:
            return "RNFM";
        case MatrixTag::PhaseSchedule:
            return "RNFP";
        }
        return "????";
    }

    std::uint8_t correlation_kind_byte(CorrelationKind kind) noexcept
    {
        return kind == CorrelationKind::ExactClustered ? 0 : 1;
    }

    std::size_t matrix_file_size(Eigen::Index rows, Eigen::Index cols)
    {
        return header_size + static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) * 16;
    }

    void write_matrix(const std::filesystem::path &path, MatrixTag tag, std::uint8_t kind, const CMatrix &m)
    {
        require(m.rows() <= 0xFFFFFFFFll && m.cols() <= 0xFFFFFFFFll, "matrix too large for the file format");
        std::vector<char> buf;
        buf.reserve(matrix_file_size(m.rows(), m.cols()));
        const std::string_view magic = matrix_tag_magic(tag);
        buf.insert(buf.end(), magic.begin(), magic.end());
        put(buf, static_cast<std::uint32_t>(m.rows()));
        put(buf, static_cast<std::uint32_t>(m.cols()));
        put(buf, kind);
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c)
            {
                put(buf, m(r, c).real());
                put(buf, m(r, c).imag());
            }

        std::filesystem::path tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                fail(ErrorKind::Io, "cannot open " + tmp.string() + " for writing");
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            if (!out)
                fail(ErrorKind::Io, "write failed for " + tmp.string());
        }
        std::error_code ec;
        std::filesystem::rename(tmp, path, ec);
        if (ec)
            fail(ErrorKind::Io, "cannot move " + tmp.string() + " into place: " + ec.message());
    }

    StoredMatrix read_matrix(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary | std::ios::ate);
        if (!in)
            fail(ErrorKind::Io, "cannot open " + path.string());
        const auto size = static_cast<std::size_t>(in.tellg());
        if (size < header_size)
            fail(ErrorKind::Io, path.string() + ": truncated header");
        std::vector<char> buf(size);
        in.seekg(0);
        in.read(buf.data(), static_cast<std::streamsize>(size));
        if (!in)
            fail(ErrorKind::Io, "read failed for " + path.string());

        StoredMatrix out;
        const std::string_view magic(buf.data(), 4);
        bool known = false;
        for (MatrixTag tag : all_tags)
            if (matrix_tag_magic(tag) == magic)
            {
                out.tag = tag;
                known = true;
            }
        if (!known)
            fail(ErrorKind::Io, path.string() + ": bad magic");

        const auto rows = get<std::uint32_t>(buf, 4);
        const auto cols = get<std::uint32_t>(buf, 8);
        out.kind = get<std::uint8_t>(buf, 12);
        if (size != matrix_file_size(rows, cols))
            fail(ErrorKind::Io, path.string() + ": size does not match header");

        out.data.resize(rows, cols);
        std::size_t offset = header_size;
        for (std::uint32_t r = 0; r < rows; ++r)
            for (std::uint32_t c = 0; c < cols; ++c)
            {
                const double re = get<double>(buf, offset);
                const double im = get<double>(buf, offset + 8);
                out.data(r, c) = cdouble(re, im);
                offset += 16;
            }
        return out;
    }
}
