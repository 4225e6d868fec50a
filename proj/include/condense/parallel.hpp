#ifndef CONDENSE_PARALLEL_HPP
#define CONDENSE_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace condense {

// Runs fn(i) for i in [0, n) across `jobs` workers. Items are claimed from a
// shared counter, so results must be written to per-index slots by fn itself;
// ordering of side effects is by index slot, never by completion time.
template <typename Fn>
void parallel_for(size_t n, unsigned jobs, Fn&& fn) {
    if (n == 0) return;
    if (jobs <= 1 || n == 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    unsigned count = jobs < n ? jobs : static_cast<unsigned>(n);
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace condense

#endif
