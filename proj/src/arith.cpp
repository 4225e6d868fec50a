#include "condense/arith.hpp"

#include <stdexcept>

namespace condense {

std::optional<ExactValue> ExactValue::parse(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::string num = text, den = "1";
    if (auto slash = text.find('/'); slash != std::string::npos) {
        num = text.substr(0, slash);
        den = text.substr(slash + 1);
        if (num.empty() || den.empty() || den.find('/') != std::string::npos) return std::nullopt;
    }
    auto digits_only = [](const std::string& s, bool sign_ok) {
        size_t i = (sign_ok && !s.empty() && s[0] == '-') ? 1 : 0;
        if (i >= s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    if (!digits_only(num, true) || !digits_only(den, false)) return std::nullopt;
    mpz_class n(num), d(den);
    if (d == 0) return std::nullopt;
    return ExactValue(n, d);
}

std::string ExactValue::to_string() const {
    if (is_integer()) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

static size_t hash_mpz(const mpz_t z, size_t seed) {
    size_t h = seed ^ (static_cast<size_t>(mpz_sgn(z)) * 0x9e3779b97f4a7c15ULL);
    size_t n = mpz_size(z);
    const mp_limb_t* limbs = mpz_limbs_read(z);
    for (size_t i = 0; i < n; ++i) {
        h ^= static_cast<size_t>(limbs[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

size_t ExactValue::hash() const {
    size_t h = hash_mpz(mpq_numref(q_.get_mpq_t()), 0x2545f4914f6cdd1dULL);
    return hash_mpz(mpq_denref(q_.get_mpq_t()), h);
}

void SearchCaps::validate() const {
    if (max_magnitude.sign() <= 0) throw std::invalid_argument("max_magnitude must be positive");
    if (max_denominator < 1) throw std::invalid_argument("max_denominator must be >= 1");
    if (max_factorial_arg > 20) throw std::invalid_argument("max_factorial_arg must be <= 20");
}

const char* binop_symbol(BinOp op) {
    switch (op) {
        case BinOp::add: return "+";
        case BinOp::sub: return "-";
        case BinOp::mul: return "*";
        case BinOp::div: return "/";
        case BinOp::pow: return "^";
    }
    return "?";
}

const char* op_error_name(OpError e) {
    switch (e) {
        case OpError::ok: return "ok";
        case OpError::undefined: return "undefined";
        case OpError::exceeds_caps: return "exceeds-caps";
        case OpError::rule_disabled: return "rule-disabled";
    }
    return "?";
}

static OpResult capped(ExactValue v, const SearchCaps& caps) {
    if (!caps.admits(v)) return OpResult::fail(OpError::exceeds_caps);
    return OpResult{std::move(v), OpError::ok};
}

// Exact a^e for integer e; inversion handles negative exponents. Caller has
// checked a != 0 when e < 0.
static ExactValue pow_exact(const ExactValue& a, long e) {
    unsigned long mag = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), a.num().get_mpz_t(), mag);
    mpz_pow_ui(den.get_mpz_t(), a.den().get_mpz_t(), mag);
    if (e < 0) std::swap(num, den);
    return ExactValue(num, den);
}

OpResult apply_binary(BinOp op, const ExactValue& a, const ExactValue& b,
                      const SearchCaps& caps, const RuleSet& rules) {
    switch (op) {
        case BinOp::add:
            if (!rules.allow_add) return OpResult::fail(OpError::rule_disabled);
            return capped(a + b, caps);
        case BinOp::sub:
            if (!rules.allow_sub) return OpResult::fail(OpError::rule_disabled);
            return capped(a - b, caps);
        case BinOp::mul:
            if (!rules.allow_mul) return OpResult::fail(OpError::rule_disabled);
            return capped(a * b, caps);
        case BinOp::div:
            if (!rules.allow_div) return OpResult::fail(OpError::rule_disabled);
            if (b.is_zero()) return OpResult::fail(OpError::undefined);
            return capped(a / b, caps);
        case BinOp::pow: {
            if (!rules.allow_pow) return OpResult::fail(OpError::rule_disabled);
            if (!b.is_integer()) return OpResult::fail(OpError::undefined);
            if (!b.fits_long()) return OpResult::fail(OpError::exceeds_caps);
            long e = b.to_long();
            if (static_cast<unsigned long>(e < 0 ? -e : e) > caps.max_exponent_abs)
                return OpResult::fail(OpError::exceeds_caps);
            if (a.is_zero()) {
                if (e > 0) return OpResult{ExactValue(0), OpError::ok};
                if (e == 0) {
                    if (!rules.zero_pow_zero_is_one) return OpResult::fail(OpError::undefined);
                    return OpResult{ExactValue(1), OpError::ok};
                }
                return OpResult::fail(OpError::undefined);  // 0^negative
            }
            return capped(pow_exact(a, e), caps);
        }
    }
    return OpResult::fail(OpError::undefined);
}

OpResult apply_factorial(const ExactValue& a, const SearchCaps& caps, const RuleSet& rules) {
    if (!rules.allow_fact) return OpResult::fail(OpError::rule_disabled);
    if (!a.is_integer() || a.sign() < 0) return OpResult::fail(OpError::undefined);
    if (!a.fits_long() || a.to_long() > static_cast<long>(caps.max_factorial_arg))
        return OpResult::fail(OpError::exceeds_caps);
    long n = a.to_long();
    if (n == 0 && !rules.zero_fact_is_one) return OpResult::fail(OpError::undefined);
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return capped(ExactValue(f), caps);
}

}  // namespace condense
