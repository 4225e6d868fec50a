#include "condense/pow5.hpp"

#include "condense/search.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <stdexcept>

namespace condense {
namespace {

SearchCaps validation_caps() {
    SearchCaps caps;
    mpz_class huge;
    mpz_ui_pow_ui(huge.get_mpz_t(), 10, 100);
    caps.max_magnitude = ExactValue(huge);
    caps.max_denominator = huge;
    caps.max_factorial_arg = 20;
    caps.max_exponent_abs = 1000000;
    return caps;
}

// Horner chain over the base-6 digits of n, least significant first. Each
// step multiplies by a six condensed from its own digit group; nonzero
// digits add a group condensed to their value. Surplus digits beyond the
// budget ride along in the leading group.
ExprPtr horner_witness(unsigned long n, const DigitMultiset& rest) {
    std::vector<int> d6 = base6_digits(n);
    uint64_t required = base_delta(d6.back());
    for (size_t i = 0; i + 1 < d6.size(); ++i) {
        required += 6;
        if (d6[i] != 0) required += base_delta(d6[i]);
    }
    if (required > rest.size())
        throw std::runtime_error("insufficient digits: exponent " + std::to_string(n) +
                                 " needs " + std::to_string(required) + " digits but only " +
                                 std::to_string(rest.size()) + " are available");
    uint64_t surplus = rest.size() - required;

    std::vector<int> ds = rest.sorted_digits();
    size_t pos = 0;
    auto take = [&](uint64_t count) {
        DigitMultiset g;
        for (uint64_t j = 0; j < count; ++j) g.add(ds[pos++]);
        return g;
    };
    ExprPtr acc = lemma_condense(d6.back(), take(base_delta(d6.back()) + surplus));
    for (size_t i = d6.size() - 1; i-- > 0;) {
        acc = Expr::make_binary(BinOp::mul, std::move(acc), lemma_condense(6, take(6)));
        if (d6[i] != 0)
            acc = Expr::make_binary(BinOp::add, std::move(acc),
                                    lemma_condense(d6[i], take(base_delta(d6[i]))));
    }
    return acc;
}

}  // namespace

DigitMultiset DecimalDigits::multiset() const {
    DigitMultiset ms;
    for (int d : digits) ms.add(d);
    return ms;
}

std::string DecimalDigits::to_string() const {
    std::string out(digits.size(), '0');
    for (size_t i = 0; i < digits.size(); ++i)
        out[i] = static_cast<char>('0' + digits[digits.size() - 1 - i]);
    return out;
}

DecimalDigits pow5_decimal(unsigned long n) {
    if (n < 1) throw std::invalid_argument("pow5_decimal: n must be positive");
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 5, n);
    std::string text = p.get_str();
    DecimalDigits out;
    out.n = n;
    out.digits.reserve(text.size());
    for (auto it = text.rbegin(); it != text.rend(); ++it) out.digits.push_back(*it - '0');
    return out;
}

std::array<uint64_t, 10> digit_histogram(unsigned long n) {
    std::array<uint64_t, 10> counts{};
    for (int d : pow5_decimal(n).digits) ++counts[static_cast<size_t>(d)];
    return counts;
}

SelfWitness prove_selfcondensable(unsigned long n, const SearchCaps& caps, const RuleSet& rules) {
    if (n < 1) throw std::invalid_argument("prove_selfcondensable: n must be positive");
    DecimalDigits p = pow5_decimal(n);
    if (n == 1) return SelfWitness{1, 0, nullptr, "5 is 5"};
    DigitMultiset rest = p.multiset();
    rest.remove(5);  // the trailing five, base of the identity

    ExprPtr expr;
    if (n <= 60 || rest.size() <= 9) {
        Engine engine(caps, rules);
        expr = engine.find(rest, ExactValue(static_cast<long>(n))).witness;
    }
    if (!expr) expr = horner_witness(n, rest);

    SelfWitness w{n, 0, expr, p.to_string() + " = 5^(" + render(*expr) + ")"};
    ValidationResult check = validate_selfcondensing(n, w);
    if (!check.ok)
        throw std::logic_error("prove_selfcondensable: witness for n=" + std::to_string(n) +
                               " failed validation: " + check.reason);
    return w;
}

ValidationResult validate_selfcondensing(unsigned long n, const SelfWitness& w) {
    if (n < 1) return {false, "value mismatch: n must be positive"};
    DecimalDigits p = pow5_decimal(n);
    if (w.base_digit_position >= p.digits.size() ||
        p.digits[w.base_digit_position] != 5)
        return {false, "multiset mismatch: base position does not hold a 5"};
    DigitMultiset rest = p.multiset();
    rest.remove(5);
    if (!w.exponent_expr) {
        if (n == 1) return {true, ""};
        return {false, "value mismatch: missing exponent expression"};
    }
    EvalResult ev = evaluate(*w.exponent_expr, validation_caps(), RuleSet{});
    if (!ev.ok()) return {false, std::string("value mismatch: exponent does not evaluate (") +
                                     op_error_name(ev.error) + ")"};
    if (ev.value != ExactValue(static_cast<long>(n)))
        return {false, "value mismatch: exponent evaluates to " + ev.value.to_string() +
                           ", expected " + std::to_string(n)};
    if (leaves(*w.exponent_expr) != rest)
        return {false, "multiset mismatch: exponent leaves are not the remaining digits of 5^" +
                           std::to_string(n)};
    return {true, ""};
}

ThresholdReport verify_thresholds() {
    ThresholdReport rep;
    auto left = [](unsigned long n) {
        RationalInterval lg = log_ratio(n, 6, 192);
        ExactValue thirteen(13), seven(7);
        return RationalInterval{thirteen * lg.lo + seven, thirteen * lg.hi + seven};
    };
    auto right = [](unsigned long n) {
        RationalInterval lg = log_ratio(5, 10, 192);
        ExactValue factor(static_cast<long>(n)), one(1);
        return RationalInterval{factor * lg.lo - one, factor * lg.hi - one};
    };
    RationalInterval l53 = left(53), r53 = right(53);
    RationalInterval l52 = left(52), r52 = right(52);
    rep.holds_at_53 = l53.hi <= r53.lo;
    rep.fails_at_52 = l52.lo > r52.hi;
    rep.left_decimals = fixed_decimals(l53, 3);
    rep.right_decimals = fixed_decimals(r53, 3);

    BoundTable tbl = dp_delta_bounds(60);
    rep.delta_bounds_ok = true;
    for (unsigned n = 24; n <= 60; ++n)
        if (tbl.at(n).bound > floor_n_log10_5(n)) rep.delta_bounds_ok = false;
    return rep;
}

}  // namespace condense
