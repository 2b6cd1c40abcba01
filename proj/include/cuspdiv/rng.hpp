#ifndef CUSPDIV_RNG_HPP
#define CUSPDIV_RNG_HPP

#include <cstdint>

namespace cuspdiv {

uint64_t splitmix64(uint64_t& state);

// xoshiro256++, explicitly seeded; substreams for parallel work are derived
// deterministically from (seed, stream) so results do not depend on the
// thread count.
class Rng {
public:
    explicit Rng(uint64_t seed, uint64_t stream = 0);

    uint64_t next();
    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);   // [lo, hi)

private:
    uint64_t s_[4];
};

}  // namespace cuspdiv

#endif
