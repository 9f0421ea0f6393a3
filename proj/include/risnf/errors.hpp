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

#ifndef RISNF_ERRORS_HPP
#define RISNF_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace risnf
{
    // Failure categories surfaced by the numerical modules. The CLI maps every
    // kind except InvalidArgument (config problems) to exit code 3.
    enum class ErrorKind
    {
        InvalidArgument,
        DegenerateInput,
        Domain,
        UnsupportedConfiguration,
        IllConditionedCoupling,
        NotPsd,
        EmptySubspace,
        UnderdeterminedDesign,
        SubspaceDesignMismatch,
        UnsupportedFastPath,
        Io,
    };

    std::string_view error_kind_name(ErrorKind kind) noexcept;

    class Error : public std::runtime_error
    {
    public:
        Error(ErrorKind kind, const std::string &what)
            : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

        ErrorKind kind() const noexcept { return kind_; }

    private:
        ErrorKind kind_;
    };

    [[noreturn]] inline void fail(ErrorKind kind, const std::string &what) { throw Error(kind, what); }

    inline void require(bool condition, const std::string &what)
    {
        if (!condition)
            fail(ErrorKind::InvalidArgument, what);
    }
}

#endif
