#ifndef CONDENSE_POW5_HPP
#define CONDENSE_POW5_HPP

#include "condense/bounds.hpp"
#include "condense/expr.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace condense {

// Exact decimal digits of 5^n, least significant first.
struct DecimalDigits {
    unsigned long n = 0;
    std::vector<int> digits;

    DigitMultiset multiset() const;
    std::string to_string() const;  // most significant first
};

// n >= 1; practical well past n = 300000.
DecimalDigits pow5_decimal(unsigned long n);

// Occurrence count of each decimal digit in 5^n.
std::array<uint64_t, 10> digit_histogram(unsigned long n);

// Proof object for "5^n is condensable from its own digits": the trailing 5
// serves as the base and the remaining digits condense into the exponent.
// n = 1 is the bare identity "5 is 5" and carries no exponent expression.
struct SelfWitness {
    unsigned long n = 0;
    uint64_t base_digit_position = 0;  // index of the consumed '5', always 0
    ExprPtr exponent_expr;             // value n over the remaining digits; null only for n = 1
    std::string identity;              // e.g. "625 = 5^(6-2)"
};

// Produces a validated SelfWitness. Small exponents (n <= 60, or at most nine
// remaining digits) try the search engine first; everything else goes through
// the constructive pipeline: base-6 digits of n, a Horner chain over the
// nonzero digits with six-factors between positions, one digit group per
// factor condensed by lemma_condense, surplus digits absorbed into the
// leading group. Throws std::runtime_error("insufficient digits...") when the
// construction budget exceeds the digit pool and search found nothing.
SelfWitness prove_selfcondensable(unsigned long n, const SearchCaps& caps = SearchCaps{},
                                  const RuleSet& rules = RuleSet{});

struct ValidationResult {
    bool ok = false;
    std::string reason;  // "value mismatch: ..." or "multiset mismatch: ..."
};

// True iff the witness's exponent evaluates to n and its leaves plus one 5
// are exactly the digit multiset of 5^n. Evaluation runs under deliberately
// generous caps: validity is a property of the expression, not of the search
// configuration that found it.
ValidationResult validate_selfcondensing(unsigned long n, const SelfWitness& w);

// Exact-arithmetic verification of the two threshold facts behind the
// constructive prover: the crossover of 13*log6(n) + 7 against
// n*log10(5) - 1 at n = 53, and dp_delta_bounds(n) <= floor(n*log10(5)) for
// n in [24, 60].
struct ThresholdReport {
    bool holds_at_53 = false;
    bool fails_at_52 = false;
    std::string left_decimals;   // 13*log6(53) + 7, floored to 3 places: "35.806"
    std::string right_decimals;  // 53*log10(5) - 1, floored to 3 places: "36.045"
    bool delta_bounds_ok = false;

    bool ok() const { return holds_at_53 && fails_at_52 && delta_bounds_ok; }
};

ThresholdReport verify_thresholds();

}  // namespace condense

#endif
