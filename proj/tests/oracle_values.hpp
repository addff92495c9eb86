#pragma once

// Generated by tests/oracles/oracles.py; do not edit.


namespace oracle {

inline constexpr double kSpectralStdD1M1 = 0.24704523031857640098;
inline constexpr double kHeatD1M1Tau1 = 7.1571658351860411364e-18;
inline constexpr double kSobolevPhi1S1 = 40.478417604357434475;
inline constexpr double kLatticeD1S1 = 3.2898681336964528729;
inline constexpr double kLatticeD2S2 = 9.6164552252767542832;
inline constexpr double kLatticeD3S2 = 41.643064071779710858;
inline constexpr double kLowerBound_4_8_2_1_1 = 0.028645833333333333333;
inline constexpr double kNoiseStdD1M1 = 0.003882976034633083816;

// Test field sin(1 + sum_k (k+2) j_k^2) on a 8 grid.
struct DftCase8 { int mode[1]; double re, im; };
inline constexpr DftCase8 kDft8[] = {
    {{0}, 0.19234361658118165, 0},
    {{1}, -0.16813783442327049, -0.19090986014505995},
    {{-3}, 0.12852761559842782, -0.08131275038720609},
    {{4}, 0.2018387267362215, 0},
};

// Test field sin(1 + sum_k (k+2) j_k^2) on a 6x6 grid.
struct DftCase6_6 { int mode[2]; double re, im; };
inline constexpr DftCase6_6 kDft6_6[] = {
    {{0, 0}, 0.06941003940135837, 0},
    {{1, -2}, 0.064388404622261752, 0.094038635001964924},
    {{-2, 3}, -0.1235900589792166, 0.042639865185810498},
    {{-1, 1}, -0.017848141757511291, 0.0020103672820572667},
};

}  // namespace oracle
