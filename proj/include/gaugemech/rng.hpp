#pragma once

// Deterministic random streams.  Seeding and the Gaussian transform are
// written out here rather than taken from <random>'s distributions, whose
// sequences are implementation-defined; reproducibility of emitted CSVs is
// part of the output contract.

#include <cstdint>
#include <random>

namespace gm {

struct SeedSpec {
    std::uint64_t master_seed = 1;
    int stream_count = 4;  // >= 1

    friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

// splitmix64 step, the usual seed expander.
inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// One independent substream; distinct stream indices decorrelate via the
// splitmix64 expansion of (master_seed, index).
class RandomStream {
  public:
    RandomStream(std::uint64_t master_seed, int stream_index) {
        std::uint64_t s = master_seed;
        for (int i = 0; i <= stream_index; ++i) splitmix64(s);
        engine_.seed(splitmix64(s));
    }

    // Uniform on [0, 1) with 53 significant bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; the spare value is kept for the next
    // call, so draws come in deterministic order.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    bool bernoulli(double p_true) { return uniform() < p_true; }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace gm
