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

#include <atomic>
#include <cstdio>
#include <iostream>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include "risnf/cache.hpp"
#include "risnf/errors.hpp"

namespace risnf
{
    namespace
    {
        std::atomic<bool> diagnostics_enabled{true};
        std::atomic<bool> verbose_enabled{false};
        std::mutex diagnostics_mutex;

        class FileLock
        {
        public:
            explicit FileLock(const std::filesystem::path &path)
            {
                fd_ = ::open(path.c_str(), O_RDWR | O_CREAT, 0644);
                if (fd_ < 0)
                    fail(ErrorKind::Io, "cannot open lock file " + path.string());
                if (::flock(fd_, LOCK_EX) != 0)
                {
                    ::close(fd_);
                    fail(ErrorKind::Io, "cannot lock " + path.string());
                }
            }
            ~FileLock()
            {
                ::flock(fd_, LOCK_UN);
                ::close(fd_);
            }
            FileLock(const FileLock &) = delete;
            FileLock &operator=(const FileLock &) = delete;

        private:
            int fd_ = -1;
        };
    }

    std::uint64_t fnv1a64(std::string_view text) noexcept
    {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : text)
        {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        return h;
    }

    std::string hex64(std::uint64_t value)
    {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
        return buf;
    }

    void diagnostic(const std::string &message)
    {
        if (!diagnostics_enabled.load())
            return;
        std::lock_guard<std::mutex> lock(diagnostics_mutex);
        std::cerr << "risnf: " << message << '\n';
    }

    void set_diagnostics_enabled(bool enabled) { diagnostics_enabled.store(enabled); }

    void trace(const std::string &message)
    {
        if (verbose_enabled.load())
            diagnostic(message);
    }

    void set_verbose(bool enabled) { verbose_enabled.store(enabled); }

    ArtifactCache::ArtifactCache(std::filesystem::path directory) : directory_(std::move(directory))
    {
        if (!enabled())
            return;
        std::error_code ec;
        std::filesystem::create_directories(directory_, ec);
        if (ec)
            fail(ErrorKind::Io, "cannot create cache directory " + directory_.string() + ": " + ec.message());
    }

    std::filesystem::path ArtifactCache::path_for(std::string_view key, MatrixTag tag) const
    {
        std::string name = hex64(fnv1a64(key)) + ".";
        for (char c : matrix_tag_magic(tag))
            name += static_cast<char>(c - 'A' + 'a');
        return directory_ / name;
    }

    CMatrix ArtifactCache::get_or_compute(std::string_view key, MatrixTag tag, std::uint8_t kind,
                                          const std::function<CMatrix()> &producer)
    {
        if (!enabled())
            return producer();

        const std::filesystem::path path = path_for(key, tag);
        std::filesystem::path lock_path = path;
        lock_path += ".lock";
        FileLock lock(lock_path);

        if (std::filesystem::exists(path))
        {
            try
            {
                StoredMatrix stored = read_matrix(path);
                if (stored.tag != tag || stored.kind != kind)
                    fail(ErrorKind::Io, "tag or kind does not match the request");
                {
                    std::lock_guard<std::mutex> guard(mutex_);
                    ++hits_;
                }
                trace("cache hit " + path.filename().string());
                return std::move(stored.data);
            }
            catch (const Error &e)
            {
                diagnostic("warning: corrupt cache file " + path.string() + " (" + e.what() + "), recomputing");
            }
        }

        CMatrix value = producer();
        write_matrix(path, tag, kind, value);
        {
            std::lock_guard<std::mutex> guard(mutex_);
            ++misses_;
        }
        trace("cache store " + path.filename().string());
        return value;
    }
}
