#ifndef CONDENSE_BOUNDS_HPP
#define CONDENSE_BOUNDS_HPP

#include "condense/expr.hpp"
#include "condense/search.hpp"

#include <vector>

namespace condense {

// Certified digit budgets for the targets 1..6: {4, 5, 6, 7, 7, 6}.
unsigned base_delta(int t);

// Constructive witness for t in [1,6] from all of s, |s| >= base_delta(t).
// Surplus digits are first removed by pairwise subtraction (reduce_to_size,
// max-pair policy) and the subtraction expressions spliced back in. The case
// analyses guarantee success; an unreachable case throws std::logic_error.
ExprPtr lemma_condense(int t, const DigitMultiset& s);

// Witness for 0 from all of s, |s| >= 8: the sorted digits are split into
// halves of size >= 4 and each half is condensed into 1.
ExprPtr condense_zero(const DigitMultiset& s);

// The three digit triples from which 1 is not condensable.
std::vector<DigitMultiset> exceptional_triples();

// Upper bounds on the least digit count per target, with how each bound was
// reached: a base case or a split n = a+b / n = a*b costing bound(a)+bound(b).
struct BoundEntry {
    enum class Kind : uint8_t { base, sum, product };
    unsigned bound = 0;
    Kind kind = Kind::base;
    unsigned a = 0, b = 0;  // split operands (sum/product only)
};

struct BoundTable {
    unsigned max_n = 0;
    std::vector<BoundEntry> entries;  // valid for indices 1..max_n

    const BoundEntry& at(unsigned n) const { return entries.at(n); }
};

// Dynamic program: base cases for n <= 6, then the best additive or
// multiplicative split. Requires max_n >= 6.
BoundTable dp_delta_bounds(unsigned max_n);

// Base-6 digits, least significant first, no leading zero. n >= 1.
std::vector<int> base6_digits(unsigned long n);

// Exact rational enclosure of an irrational quantity; lo <= x <= hi.
struct RationalInterval {
    ExactValue lo, hi;

    ExactValue width() const { return hi - lo; }
};

// Enclosure of log(x)/log(base) for x >= 1, base >= 2, computed with outward
// directed rounding at the given precision. Exact (zero-width) when x is a
// perfect power of the base.
RationalInterval log_ratio(unsigned long x, unsigned long base, unsigned prec_bits = 128);

// Rational upper bound on 13*log6(n) + 7, within 1e-6 of the true value.
ExactValue log_bound(unsigned long n);

// floor(n * log10(5)) == (decimal digit count of 5^n) - 1, computed exactly.
unsigned long floor_n_log10_5(unsigned long n);

// floor(k * log5(10)) == the largest a with 5^a <= 10^k, computed exactly.
unsigned long floor_k_log5_10(unsigned long k);

// Decimal rendering of an enclosure, floored to `places` digits, or empty
// when the enclosure is too wide to pin those digits down.
std::string fixed_decimals(const RationalInterval& iv, unsigned places);

}  // namespace condense

#endif
