#ifndef CONDENSE_ARITH_HPP
#define CONDENSE_ARITH_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

namespace condense {

// Exact rational value in canonical form: gcd(num, den) = 1, den >= 1.
// Thin wrapper over mpq_class so the rest of the library can hash values,
// print them as "p" / "p/q", and stay oblivious to GMP details.
class ExactValue {
public:
    ExactValue() : q_(0) {}
    ExactValue(long n) : q_(n) {}
    explicit ExactValue(const mpz_class& z) : q_(z) {}
    explicit ExactValue(const mpq_class& q) : q_(q) { q_.canonicalize(); }
    ExactValue(const mpz_class& num, const mpz_class& den) : q_(num, den) { q_.canonicalize(); }

    // Parses "p" or "p/q" with optional leading '-'. Returns nullopt on junk
    // or a zero denominator.
    static std::optional<ExactValue> parse(const std::string& text);

    const mpq_class& raw() const { return q_; }
    mpz_class num() const { return q_.get_num(); }
    mpz_class den() const { return q_.get_den(); }

    bool is_zero() const { return mpq_sgn(q_.get_mpq_t()) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return mpq_sgn(q_.get_mpq_t()); }

    // Only meaningful when is_integer() and the value fits; checked.
    bool fits_long() const { return is_integer() && q_.get_num().fits_slong_p(); }
    long to_long() const { return q_.get_num().get_si(); }

    ExactValue operator-() const { return ExactValue(mpq_class(-q_)); }
    ExactValue operator+(const ExactValue& o) const { return ExactValue(mpq_class(q_ + o.q_)); }
    ExactValue operator-(const ExactValue& o) const { return ExactValue(mpq_class(q_ - o.q_)); }
    ExactValue operator*(const ExactValue& o) const { return ExactValue(mpq_class(q_ * o.q_)); }
    // Caller guarantees o != 0.
    ExactValue operator/(const ExactValue& o) const { return ExactValue(mpq_class(q_ / o.q_)); }

    ExactValue abs() const { return ExactValue(mpq_class(::abs(q_))); }
    ExactValue reciprocal() const { return ExactValue(q_.get_den(), q_.get_num()); }

    bool operator==(const ExactValue& o) const { return mpq_equal(q_.get_mpq_t(), o.q_.get_mpq_t()) != 0; }
    bool operator!=(const ExactValue& o) const { return !(*this == o); }
    bool operator<(const ExactValue& o) const { return mpq_cmp(q_.get_mpq_t(), o.q_.get_mpq_t()) < 0; }
    bool operator<=(const ExactValue& o) const { return mpq_cmp(q_.get_mpq_t(), o.q_.get_mpq_t()) <= 0; }
    bool operator>(const ExactValue& o) const { return o < *this; }
    bool operator>=(const ExactValue& o) const { return o <= *this; }

    std::string to_string() const;
    size_t hash() const;

private:
    mpq_class q_;
};

struct ExactValueHash {
    size_t operator()(const ExactValue& v) const { return v.hash(); }
};

// The six game rules plus the two small-value conventions. Everything on by
// default; toggles model restricted variants of the game.
struct RuleSet {
    bool allow_add = true;
    bool allow_sub = true;
    bool allow_mul = true;
    bool allow_div = true;
    bool allow_pow = true;
    bool allow_fact = true;
    bool zero_fact_is_one = true;   // 0! = 1 when set, undefined otherwise
    bool zero_pow_zero_is_one = true;  // 0^0 = 1 when set, undefined otherwise

    bool operator==(const RuleSet&) const = default;
};

// Explicit bounds that keep every search space finite. A value is admissible
// when |v| <= max_magnitude and den(v) <= max_denominator.
struct SearchCaps {
    ExactValue max_magnitude = ExactValue(mpz_class("1000000000000"));  // 10^12
    mpz_class max_denominator = 1000000;                                // 10^6
    unsigned max_factorial_arg = 12;
    unsigned max_exponent_abs = 30;

    bool operator==(const SearchCaps&) const = default;

    // Throws std::invalid_argument on nonsense (non-positive bounds,
    // max_factorial_arg > 20).
    void validate() const;

    bool admits(const ExactValue& v) const {
        return v.abs() <= max_magnitude && v.den() <= max_denominator;
    }
};

enum class BinOp : uint8_t { add, sub, mul, div, pow };

const char* binop_symbol(BinOp op);

enum class OpError : uint8_t {
    ok = 0,
    undefined,      // division by zero, (-1)!, 0^-2, fractional exponent, ...
    exceeds_caps,   // result (or factorial arg / exponent) outside SearchCaps
    rule_disabled,  // the operation's rule is toggled off
};

const char* op_error_name(OpError e);

struct OpResult {
    ExactValue value;
    OpError error = OpError::ok;

    bool ok() const { return error == OpError::ok; }
    static OpResult fail(OpError e) { return OpResult{ExactValue(), e}; }
};

// a <op> b under the game conventions. Division by zero and 0^negative are
// undefined; pow requires an integer exponent with |b| <= max_exponent_abs;
// 0^0 follows the convention toggle. Results outside caps are rejected.
OpResult apply_binary(BinOp op, const ExactValue& a, const ExactValue& b,
                      const SearchCaps& caps, const RuleSet& rules);

// a! for integer a with 0 <= a <= max_factorial_arg; 0! follows the toggle.
OpResult apply_factorial(const ExactValue& a, const SearchCaps& caps, const RuleSet& rules);

}  // namespace condense

#endif
