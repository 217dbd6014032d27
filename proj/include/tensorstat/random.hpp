#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

namespace tensorstat {

/// Seed plus substream index. Equal seeds give equal draw sequences.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

inline constexpr std::size_t kSampleChunk = 1024;

/// Engine for chunk `chunk` of substream (seed, stream). Chunks are
/// independent, so a draw's value depends only on its position.
inline std::mt19937_64 chunk_engine(RngSeed seed, std::uint64_t chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed.seed),
                      static_cast<std::uint32_t>(seed.seed >> 32),
                      static_cast<std::uint32_t>(seed.stream),
                      static_cast<std::uint32_t>(seed.stream >> 32),
                      static_cast<std::uint32_t>(chunk),
                      static_cast<std::uint32_t>(chunk >> 32)};
    return std::mt19937_64(seq);
}

/// Calls draw(engine, k) for k in [0, count), splitting the range into fixed
/// chunks spread over `workers` threads (0 = hardware concurrency). Output
/// does not depend on the worker count.
template <class Draw>
void for_each_draw(std::size_t count, RngSeed seed, std::size_t workers, Draw&& draw) {
    const std::size_t chunks = (count + kSampleChunk - 1) / kSampleChunk;
    auto run_chunk = [&](std::size_t c) {
        auto engine = chunk_engine(seed, c);
        const std::size_t end = std::min(count, (c + 1) * kSampleChunk);
        for (std::size_t k = c * kSampleChunk; k < end; ++k)
            draw(engine, k);
    };
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, chunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c)
            run_chunk(c);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t c = w; c < chunks; c += workers)
                run_chunk(c);
        });
    for (auto& t : pool)
        t.join();
}

}  // namespace tensorstat
