#ifndef ZMOM_PARALLEL_HPP
#define ZMOM_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace zmom {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(chunk_index) for chunk_index in [0, n_chunks). Work is handed out
// through an atomic counter, so results must not depend on which thread runs
// a chunk. Chunk boundaries are fixed by the caller, which keeps outputs
// identical for any thread count.
template <typename Fn>
void parallel_for_chunks(std::size_t n_chunks, int threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || n_chunks <= 1) {
        for (std::size_t i = 0; i < n_chunks; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n_chunks || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true)) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    int nw = threads < static_cast<int>(n_chunks) ? threads : static_cast<int>(n_chunks);
    pool.reserve(static_cast<std::size_t>(nw));
    for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

} // namespace zmom

#endif
