#pragma once

#include <cstdint>
#include <cstring>

namespace polling {

struct Fnv1a {
    std::uint64_t h = 1469598103934665603ull;

    void add_bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    }
    void add(double v) { add_bytes(&v, sizeof v); }
    void add(std::uint64_t v) { add_bytes(&v, sizeof v); }
    std::uint64_t value() const { return h; }
};

}  // namespace polling
