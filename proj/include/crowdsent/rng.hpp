#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace crowdsent {

// Deterministic random source. mt19937_64 output is pinned by the standard,
// and the derived draws below avoid std::*_distribution, whose results vary
// between standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return n ? gen_() % n : 0; }

    // uniform double in [0, 1) with 53 random bits
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // standard normal via Box-Muller
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    // geometric-flavoured non-negative count with the given mean
    std::int64_t count_with_mean(double mean) {
        if (mean <= 0.0) return 0;
        double u = uniform01();
        while (u >= 1.0) u = uniform01();
        return static_cast<std::int64_t>(-mean * std::log1p(-u));
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace crowdsent
