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

#include "risnf/errors.hpp"

namespace risnf
{
    std::string_view error_kind_name(ErrorKind kind) noexcept
    {
        switch (kind)
        {
        case ErrorKind::InvalidArgument:
            return "invalid-argument";
        case ErrorKind::DegenerateInput:
            return "degenerate-input";
        case ErrorKind::Domain:
            return "domain";
        case ErrorKind::UnsupportedConfiguration:
            return "unsupported-configuration";
        case ErrorKind::IllConditionedCoupling:
            return "ill-conditioned-coupling";
        case ErrorKind::NotPsd:
            return "not-psd";
        case ErrorKind::EmptySubspace:
            return "empty-subspace";
        case ErrorKind::UnderdeterminedDesign:
            return "underdetermined-design";
        case ErrorKind::SubspaceDesignMismatch:
            return "subspace-design-mismatch";
        case ErrorKind::UnsupportedFastPath:
            return "unsupported-fast-path";
        case ErrorKind::Io:
            return "io";
        }
        return "unknown";
    }
}
