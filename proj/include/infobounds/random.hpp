#pragma once

// Reproducible random streams. Every replication (and every arm inside a
// bandit replication) draws from its own engine, seeded by hashing the
// master seed with the stream coordinates. Results therefore do not depend on
// which thread runs which replication.

#include <algorithm>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

namespace infobounds {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t substream = 0) {
    return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ (substream * 0xd1b54a32d192ed03ULL));
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t master, std::uint64_t stream, std::uint64_t substream = 0) {
    return Engine(stream_seed(master, stream, substream));
}

/// Uniform on [0,1) with 53 random bits.
inline double uniform01(Engine& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, count) on `threads` workers with a static
/// partition. Each worker owns a slice of the output, so there is no sharing.
template <typename Body>
void parallel_for(std::uint64_t count, unsigned threads, Body body) {
    threads = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), std::max<std::uint64_t>(count, 1)));
    if (threads <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        const std::uint64_t begin = count * w / threads;
        const std::uint64_t end = count * (w + 1) / threads;
        pool.emplace_back([begin, end, &body] {
            for (std::uint64_t i = begin; i < end; ++i) body(i);
        });
    }
}

} // namespace infobounds
