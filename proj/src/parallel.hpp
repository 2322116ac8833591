/**
 * Copyright 2026 The rawisp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef RAWISP_SRC_PARALLEL_HPP_
#define RAWISP_SRC_PARALLEL_HPP_

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace rawisp::detail {

/// Splits [0, count) into at most `threads` contiguous chunks and calls
/// fn(begin, end) for each, one chunk per worker. The unit of work is fixed by
/// the caller, so per-element results never depend on the worker count.
template <typename Fn>
void parallel_for(int64_t count, int threads, Fn&& fn) {
  if (count <= 0) return;
  const int64_t workers = std::clamp<int64_t>(threads, 1, count);
  if (workers == 1) {
    fn(int64_t{0}, count);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<size_t>(workers - 1));
    const int64_t chunk = count / workers;
    const int64_t extra = count % workers;
    int64_t begin = 0;
    for (int64_t t = 0; t < workers; ++t) {
      const int64_t end = begin + chunk + (t < extra ? 1 : 0);
      auto task = [&fn, &errors, t, begin, end] {
        try {
          fn(begin, end);
        } catch (...) {
          errors[static_cast<size_t>(t)] = std::current_exception();
        }
      };
      if (t + 1 == workers) {
        task();
      } else {
        pool.emplace_back(task);
      }
      begin = end;
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace rawisp::detail

#endif  // RAWISP_SRC_PARALLEL_HPP_
