#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace tmq {

inline unsigned default_jobs() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

/// Applies fn to every item on up to `jobs` threads; results keep input order.
/// The first exception thrown by any worker is rethrown after all workers join.
template <class In, class Fn>
auto ordered_map(const std::vector<In>& items, Fn fn, unsigned jobs) -> std::vector<decltype(fn(items[0]))> {
    using Out = decltype(fn(items[0]));
    std::vector<Out> out(items.size());
    if (items.empty()) return out;
    jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(items.size())));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(jobs);
    auto worker = [&](unsigned id) {
        try {
            for (std::size_t i = next++; i < items.size(); i = next++) out[i] = fn(items[i]);
        } catch (...) {
            errors[id] = std::current_exception();
            next = items.size();
        }
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned id = 0; id < jobs; ++id) pool.emplace_back(worker, id);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace tmq
