#pragma once

namespace maxcorr {

inline constexpr const char* kVersion = "0.1.0";

// Identity of the random stream construction. Recorded in every artifact
// that depends on a seed so runs can be reproduced bit-for-bit elsewhere.
inline constexpr const char* kRngAlgorithm =
    "xoshiro256++ / splitmix64-keyed blocks of 65536 draws";

} // namespace maxcorr
