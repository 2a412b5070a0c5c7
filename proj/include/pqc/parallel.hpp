// Copyright 2026 The PQC Ensemble Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace pqc::detail {

/**
 * Fork-join over [0, count) in contiguous chunks. body(begin, end) must only
 * write to slots it owns. The first exception thrown by a worker is
 * rethrown on the calling thread after every worker has joined.
 */
inline void parallel_for(std::size_t count, std::size_t workers, std::size_t chunk,
                         const std::function<void(std::size_t, std::size_t)> &body) {
    if (count == 0)
        return;
    workers = std::max<std::size_t>(1, workers);
    if (chunk == 0)
        chunk = (count + workers - 1) / workers;
    const std::size_t chunks = (count + chunk - 1) / chunk;
    if (workers == 1 || chunks == 1) {
        body(0, count);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    // static round-robin assignment of chunks
                    for (std::size_t c = w; c < chunks; c += workers) {
                        const std::size_t begin = c * chunk;
                        body(begin, std::min(count, begin + chunk));
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto &e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace pqc::detail
