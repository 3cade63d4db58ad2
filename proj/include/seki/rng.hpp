#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace seki {

// splitmix64 state advance; also used as the stream-derivation mixer.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-derived pseudo-random stream. A stream is addressed by
// (seed, phase, iteration, member), so parallel sweeps and restarts draw
// identical values regardless of scheduling or thread count.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t phase, std::uint64_t iteration,
              std::uint64_t member)
        : state_(seed) {
        // Fold the stream coordinates into the state one at a time.
        splitmix64_next(state_);
        state_ ^= 0xD1B54A32D192ED03ULL * (phase + 1);
        splitmix64_next(state_);
        state_ ^= 0x8CB92BA72F3D8DD7ULL * (iteration + 1);
        splitmix64_next(state_);
        state_ ^= 0xEB44ACCAB455D165ULL * (member + 1);
        splitmix64_next(state_);
    }

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    // Uniform in (0, 1); never returns 0 so log() below is safe.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; consumes two uniforms per draw.
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

// Stream phases used by the solver; kept distinct so that reusing a seed
// across purposes never aliases draws.
enum class RngPhase : std::uint64_t {
    init_ensemble = 1,
    perturbed_observation = 2,
    truth_generation = 3,
    measurement_noise = 4,
    sensing_matrix = 5,
    diagnostic = 6,
};

inline RngStream make_stream(std::uint64_t seed, RngPhase phase,
                             std::uint64_t iteration = 0, std::uint64_t member = 0) {
    return RngStream(seed, static_cast<std::uint64_t>(phase), iteration, member);
}

}  // namespace seki
