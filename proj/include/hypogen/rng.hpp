#pragma once
// Seeded randomness with platform-stable results.
//
// std::shuffle and the standard distributions are implementation-defined,
// so reproducible splits and form exports draw from mt19937_64 directly.

#include <cstdint>
#include <random>
#include <vector>

namespace hypogen {

class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next() { return gen_(); }

    // Uniform in [0, bound) by modulo; the tiny bias is irrelevant here.
    uint64_t below(uint64_t bound) { return bound == 0 ? 0 : gen_() % bound; }

    double unit() {  // [0, 1)
        return static_cast<double>(gen_() >> 11) * (1.0 / 9007199254740992.0);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace hypogen
