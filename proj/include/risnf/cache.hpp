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

#ifndef RISNF_CACHE_HPP
#define RISNF_CACHE_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>

#include "risnf/matrix_io.hpp"
#include "risnf/types.hpp"

namespace risnf
{
    std::uint64_t fnv1a64(std::string_view text) noexcept;
    std::string hex64(std::uint64_t value);

    // Diagnostics go to stderr unless silenced
    void diagnostic(const std::string &message);
    void set_diagnostics_enabled(bool enabled);

    // Per-file cache events, off unless verbose
    void trace(const std::string &message);
    void set_verbose(bool enabled);

    // Binary matrix cache keyed by the hash of a description of everything
    // upstream of the matrix. An empty directory disables caching.
    class ArtifactCache
    {
    public:
        explicit ArtifactCache(std::filesystem::path directory = {});

        bool enabled() const { return !directory_.empty(); }
        const std::filesystem::path &directory() const { return directory_; }

        std::filesystem::path path_for(std::string_view key, MatrixTag tag) const;

        // Returns the stored matrix when present and well formed, otherwise
        // runs the producer and stores its result. Corrupt files are
        // replaced with a warning. Holds an advisory lock per key meanwhile.
        CMatrix get_or_compute(std::string_view key, MatrixTag tag, std::uint8_t kind,
                               const std::function<CMatrix()> &producer);

        std::size_t hits() const { return hits_; }
        std::size_t misses() const { return misses_; }

    private:
        std::filesystem::path directory_;
        std::mutex mutex_;
        std::size_t hits_ = 0;
        std::size_t misses_ = 0;
    };
}

#endif
