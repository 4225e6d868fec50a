#ifndef CONDENSE_CYCLES_HPP
#define CONDENSE_CYCLES_HPP

#include "condense/pow5.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace condense {

// S_k: the position-k decimal digits of 5^1, 5^2, ... (position 0 = units).
// Generated from the digit recurrence alone; no big-integer arithmetic.
struct DigitStream {
    unsigned k = 0;
    std::vector<int> entries;  // entries[i] = digit k of 5^(i+1)
};

DigitStream digit_stream(unsigned k, unsigned long n_max);

// Digit k of 5^n via modular exponentiation; the independent oracle for the
// recurrence.
int digit_oracle(unsigned k, unsigned long n);

// Verified cycle of S_k: the window starting at n = k+1 repeats with period
// 2^(k-1), certified by full-state recurrence (positions 0..k jointly), and
// the half-period shift d(n + l/2) = d(n) +- 5 pins the period as minimal.
struct CycleReport {
    unsigned k = 0;
    unsigned long start_index = 0;  // earliest n from which periodicity is certified
    uint64_t length = 0;            // 2^(k-1)
    std::array<uint64_t, 10> counts{};
    uint64_t leading_zero_count = 0;  // zeros opening the window at n = k+1
    bool half_period_shift_verified = false;
};

// 2 <= k <= 24. Throws std::runtime_error("verification failed...") if the
// window fails to repeat (a defect, never expected).
CycleReport cycle_report(unsigned k);

// The 10x10 zero-one matrix with A[i][j] = 1 iff i = j/2 or i = j/2 + 5
// (integer division), and the seed vector u = e_2.
struct ContributionMatrix {
    std::array<std::array<int, 10>, 10> a{};
    std::array<uint64_t, 10> u{};
};

ContributionMatrix contribution_matrix();

// Exact digit counts of one period of C_k: A^(k-1) u. 2 <= k <= 63.
std::array<uint64_t, 10> predicted_counts(unsigned k);

// Mod-2 residues of v_2..v_{k_max} and the parity facts behind the
// no-zero-free-period argument: the orbit has period 4 from k = 3, and the
// (2,3,6,7)-component sum is odd for u and every v_k.
struct Mod2Orbit {
    unsigned k_max = 0;
    std::vector<std::array<int, 10>> residues;  // residues[i] = v_{i+2} mod 2
    std::vector<int> component_sums;            // for u, v_2, v_3, ...: starts 1,1,1,3,1,3,1
    bool period4_from_3 = false;
    bool all_sums_odd = false;
};

Mod2Orbit mod2_orbit(unsigned k_max);  // k_max >= 7

// C_k opens with at least floor(k*log5(10)) - k zeros; both sides computed
// exactly.
struct LeadingZeroCheck {
    unsigned k = 0;
    uint64_t observed = 0;
    uint64_t bound = 0;
    bool ok = false;
};

LeadingZeroCheck leading_zeros_bound_check(unsigned k);  // k >= 2

// Longest block of consecutive zeros in 5^n; position counts from the most
// significant digit (offset into the printed number), leftmost run wins ties.
struct ZeroRun {
    uint64_t length = 0;
    uint64_t position = 0;
};

ZeroRun max_zero_run(unsigned long n);

// Smallest n <= n_limit whose maximal zero run reaches r, if any.
std::optional<unsigned long> first_exponent_with_run(unsigned r, unsigned long n_limit);

// The witness family n = m + 2^m + 2 whose zero runs grow without bound.
struct ZeroRunWitness {
    unsigned m = 0;
    unsigned long n = 0;
    uint64_t run_length = 0;
    uint64_t run_position = 0;
};

// m = 2..m_max (m_max <= 26). Throws std::runtime_error("monotonicity
// violated...") if a run shrinks (a defect, never expected).
std::vector<ZeroRunWitness> zero_run_witnesses(unsigned m_max);

}  // namespace condense

#endif
