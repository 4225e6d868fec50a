#include "condense/bounds.hpp"

#include <mpfr.h>

#include <algorithm>
#include <climits>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>

namespace condense {
namespace {

ExprPtr L(int d) { return Expr::make_leaf(d); }

ExprPtr bin(BinOp op, ExprPtr a, ExprPtr b) {
    return Expr::make_binary(op, std::move(a), std::move(b));
}

// A zero participates as 0! wherever a unit atom is needed.
ExprPtr unit_atom(int d) { return d == 0 ? Expr::make_factorial(L(0)) : L(d); }

bool is_unit_digit(int d) { return d == 0 || d == 1; }

ExprPtr add_chain(const std::vector<int>& digits) {
    ExprPtr e = L(digits.front());
    for (size_t i = 1; i < digits.size(); ++i) e = bin(BinOp::add, e, L(digits[i]));
    return e;
}

std::vector<int> erase_at(std::vector<int> v, size_t i, size_t j = SIZE_MAX) {
    if (j != SIZE_MAX) v.erase(v.begin() + static_cast<ptrdiff_t>(j));
    v.erase(v.begin() + static_cast<ptrdiff_t>(i));
    return v;
}

// 1 from four digits. Scan order: a unit atom raised to the sum of the rest,
// then an equal pair as a quotient, then an adjacent pair as a difference,
// each with the leftover digits as the exponent. What survives all three
// scans has pairwise gaps >= 2 within {2..9}: exactly five quadruples, each
// with a hand-built witness.
ExprPtr one_from_four(const std::vector<int>& ds) {
    for (size_t i = 0; i < ds.size(); ++i)
        if (is_unit_digit(ds[i]))
            return bin(BinOp::pow, unit_atom(ds[i]), add_chain(erase_at(ds, i)));
    for (size_t i = 0; i + 1 < ds.size(); ++i)
        if (ds[i] == ds[i + 1])
            return bin(BinOp::pow, bin(BinOp::div, L(ds[i]), L(ds[i + 1])),
                       add_chain(erase_at(ds, i, i + 1)));
    for (size_t i = 0; i + 1 < ds.size(); ++i)
        if (ds[i + 1] == ds[i] + 1)
            return bin(BinOp::pow, bin(BinOp::sub, L(ds[i + 1]), L(ds[i])),
                       add_chain(erase_at(ds, i, i + 1)));
    using V = std::vector<int>;
    if (ds == V{2, 4, 6, 8})
        return bin(BinOp::pow, bin(BinOp::div, bin(BinOp::add, L(2), L(4)), L(6)), L(8));
    if (ds == V{2, 4, 6, 9})
        return bin(BinOp::pow, bin(BinOp::div, bin(BinOp::add, L(2), L(4)), L(6)), L(9));
    if (ds == V{2, 4, 7, 9})
        return bin(BinOp::pow, bin(BinOp::sub, bin(BinOp::mul, L(2), L(4)), L(7)), L(9));
    if (ds == V{2, 5, 7, 9})
        return bin(BinOp::pow, bin(BinOp::sub, bin(BinOp::mul, L(2), L(5)), L(9)), L(7));
    if (ds == V{3, 5, 7, 9})
        return bin(BinOp::pow, bin(BinOp::sub, bin(BinOp::sub, L(9), L(3)), L(5)), L(7));
    throw std::logic_error("one_from_four: unhandled quadruple");
}

// 1 from three digits, or nullopt for the three exceptional triples.
std::optional<ExprPtr> one_from_three(const std::vector<int>& ds) {
    for (size_t i = 0; i < ds.size(); ++i)
        if (is_unit_digit(ds[i])) {
            auto rest = erase_at(ds, i);
            return bin(BinOp::pow, unit_atom(ds[i]), bin(BinOp::add, L(rest[0]), L(rest[1])));
        }
    for (size_t i = 0; i + 1 < ds.size(); ++i)
        if (ds[i] == ds[i + 1])
            return bin(BinOp::pow, bin(BinOp::div, L(ds[i]), L(ds[i + 1])),
                       L(erase_at(ds, i, i + 1)[0]));
    for (size_t i = 0; i + 1 < ds.size(); ++i)
        if (ds[i + 1] == ds[i] + 1)
            return bin(BinOp::pow, bin(BinOp::sub, L(ds[i + 1]), L(ds[i])),
                       L(erase_at(ds, i, i + 1)[0]));
    int a = ds[0], b = ds[1], c = ds[2];
    if (a + b == c) return bin(BinOp::div, bin(BinOp::add, L(a), L(b)), L(c));
    if (a + b == c + 1) return bin(BinOp::sub, bin(BinOp::add, L(a), L(b)), L(c));
    if (c == a + b + 1) return bin(BinOp::sub, bin(BinOp::sub, L(c), L(a)), L(b));
    if (a * b == c) return bin(BinOp::div, bin(BinOp::mul, L(a), L(b)), L(c));
    if (a * b == c + 1) return bin(BinOp::sub, bin(BinOp::mul, L(a), L(b)), L(c));
    if (c == a * b + 1) return bin(BinOp::sub, L(c), bin(BinOp::mul, L(a), L(b)));
    return std::nullopt;
}

// 2 from five digits. A digit <= 3 combines with 1 condensed from the other
// four; otherwise an equal or adjacent pair supplies a unit U and the leftover
// triple supplies 1 (or, for the exceptional triples, a bespoke combination
// with U).
ExprPtr two_from_five(const DigitMultiset& s) {
    for (int d = 0; d <= 3; ++d)
        if (s.count(d)) {
            DigitMultiset rest = s;
            rest.remove(d);
            ExprPtr one = lemma_condense(1, rest);
            switch (d) {
                case 0: return bin(BinOp::add, unit_atom(0), std::move(one));
                case 1: return bin(BinOp::add, L(1), std::move(one));
                case 2: return bin(BinOp::mul, L(2), std::move(one));
                default: return bin(BinOp::sub, L(3), std::move(one));
            }
        }
    auto ds = s.sorted_digits();
    auto with_unit = [&](size_t i, bool equal) -> ExprPtr {
        ExprPtr unit = equal ? bin(BinOp::div, L(ds[i]), L(ds[i + 1]))
                             : bin(BinOp::sub, L(ds[i + 1]), L(ds[i]));
        auto t = erase_at(ds, i, i + 1);
        if (auto one = one_from_three(t)) return bin(BinOp::add, std::move(unit), *one);
        using V = std::vector<int>;
        if (t == V{4, 6, 8})
            return bin(BinOp::mul, bin(BinOp::sub, bin(BinOp::add, L(4), L(6)), L(8)),
                       std::move(unit));
        if (t == V{4, 7, 9})
            return bin(BinOp::div, bin(BinOp::mul, L(4), std::move(unit)),
                       bin(BinOp::sub, L(9), L(7)));
        if (t == V{5, 7, 9})
            return bin(BinOp::mul, bin(BinOp::sub, L(7), L(5)),
                       bin(BinOp::pow, std::move(unit), L(9)));
        throw std::logic_error("two_from_five: unhandled triple beside the unit pair");
    };
    for (size_t i = 0; i + 1 < ds.size(); ++i)
        if (ds[i] == ds[i + 1]) return with_unit(i, true);
    for (size_t i = 0; i + 1 < ds.size(); ++i)
        if (ds[i + 1] == ds[i] + 1) return with_unit(i, false);
    throw std::logic_error("two_from_five: five digits above 3 with no equal or adjacent pair");
}

// 3 from six digits. A digit <= 6 combines with 1 or 2 condensed from the
// other five; all-{7,8,9} multisets pair up consecutive sorted digits, whose
// differences can only form four patterns, each summing to 3.
ExprPtr three_from_six(const DigitMultiset& s) {
    for (int d = 0; d <= 6; ++d)
        if (s.count(d)) {
            DigitMultiset rest = s;
            rest.remove(d);
            switch (d) {
                case 0: return bin(BinOp::add, unit_atom(0), lemma_condense(2, rest));
                case 1: return bin(BinOp::add, L(1), lemma_condense(2, rest));
                case 2: return bin(BinOp::add, L(2), lemma_condense(1, rest));
                case 3: return bin(BinOp::mul, L(3), lemma_condense(1, rest));
                case 4: return bin(BinOp::sub, L(4), lemma_condense(1, rest));
                case 5: return bin(BinOp::sub, L(5), lemma_condense(2, rest));
                default: return bin(BinOp::div, L(6), lemma_condense(2, rest));
            }
        }
    auto ds = s.sorted_digits();
    struct Diff {
        int v;
        ExprPtr e;
    };
    std::vector<Diff> diffs;
    for (size_t i = 0; i + 1 < ds.size(); i += 2)
        diffs.push_back({ds[i + 1] - ds[i], bin(BinOp::sub, L(ds[i + 1]), L(ds[i]))});
    std::stable_sort(diffs.begin(), diffs.end(),
                     [](const Diff& a, const Diff& b) { return a.v < b.v; });
    auto fact = [](ExprPtr e) { return Expr::make_factorial(std::move(e)); };
    int x = diffs[0].v, y = diffs[1].v, z = diffs[2].v;
    ExprPtr ex = diffs[0].e, ey = diffs[1].e, ez = diffs[2].e;
    if (x == 0 && y == 0 && z == 0)
        return bin(BinOp::add, bin(BinOp::add, fact(ex), fact(ey)), fact(ez));
    if (x == 0 && y == 0 && z == 1)
        return bin(BinOp::add, bin(BinOp::add, fact(ex), fact(ey)), ez);
    if (x == 0 && y == 0 && z == 2)
        return bin(BinOp::add, bin(BinOp::mul, fact(ex), fact(ey)), ez);
    if (x == 0 && y == 1 && z == 1) return bin(BinOp::add, bin(BinOp::add, fact(ex), ey), ez);
    throw std::logic_error("three_from_six: difference pattern outside the case table");
}

// 4 or 5 from seven digits. A digit <= 8 combines with 1, 2, 3, or 6
// condensed from the other six; the only remaining multiset is seven 9s,
// which has hand-built witnesses for both targets.
ExprPtr four_or_five_from_seven(int t, const DigitMultiset& s) {
    for (int d = 0; d <= 8; ++d)
        if (s.count(d)) {
            DigitMultiset rest = s;
            rest.remove(d);
            auto from_rest = [&](int m) { return lemma_condense(m, rest); };
            if (t == 4) switch (d) {
                    case 0: return bin(BinOp::add, unit_atom(0), from_rest(3));
                    case 1: return bin(BinOp::add, L(1), from_rest(3));
                    case 2: return bin(BinOp::add, L(2), from_rest(2));
                    case 3: return bin(BinOp::add, L(3), from_rest(1));
                    case 4: return bin(BinOp::mul, L(4), from_rest(1));
                    case 5: return bin(BinOp::sub, L(5), from_rest(1));
                    case 6: return bin(BinOp::sub, L(6), from_rest(2));
                    case 7: return bin(BinOp::sub, L(7), from_rest(3));
                    default: return bin(BinOp::div, L(8), from_rest(2));
                }
            switch (d) {
                case 0: return bin(BinOp::sub, from_rest(6), unit_atom(0));
                case 1: return bin(BinOp::sub, from_rest(6), L(1));
                case 2: return bin(BinOp::add, L(2), from_rest(3));
                case 3: return bin(BinOp::add, L(3), from_rest(2));
                case 4: return bin(BinOp::add, L(4), from_rest(1));
                case 5: return bin(BinOp::mul, L(5), from_rest(1));
                case 6: return bin(BinOp::sub, L(6), from_rest(1));
                case 7: return bin(BinOp::sub, L(7), from_rest(2));
                default: return bin(BinOp::sub, L(8), from_rest(3));
            }
        }
    if (t == 4) {
        ExprPtr sum = bin(BinOp::add, bin(BinOp::add, bin(BinOp::add, L(9), L(9)), L(9)), L(9));
        return bin(BinOp::sub, bin(BinOp::add, bin(BinOp::div, std::move(sum), L(9)), L(9)),
                   L(9));
    }
    ExprPtr run = bin(BinOp::mul, L(9), L(9));
    for (int i = 0; i < 4; ++i) run = bin(BinOp::sub, std::move(run), L(9));
    return bin(BinOp::div, std::move(run), L(9));
}

ExactValue exact_from_mpfr(mpfr_srcptr f) {
    if (mpfr_zero_p(f)) return ExactValue(0);
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), f);
    mpq_class q(m);
    if (e > 0)
        mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    else if (e < 0)
        mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    return ExactValue(q);
}

}  // namespace

unsigned base_delta(int t) {
    switch (t) {
        case 1: return 4;
        case 2: return 5;
        case 3: return 6;
        case 4: return 7;
        case 5: return 7;
        case 6: return 6;
    }
    throw std::invalid_argument("base_delta: target must be in 1..6");
}

ExprPtr lemma_condense(int t, const DigitMultiset& s) {
    unsigned base = base_delta(t);
    if (s.size() < base)
        throw std::invalid_argument("lemma_condense: target " + std::to_string(t) +
                                    " needs at least " + std::to_string(base) + " digits");
    if (s.size() > base) {
        ReduceResult red = reduce_to_size(s, base);
        return splice_reduction(lemma_condense(t, red.reduced), s, red.steps);
    }
    switch (t) {
        case 1: return one_from_four(s.sorted_digits());
        case 2: return two_from_five(s);
        case 3: return three_from_six(s);
        case 6: return Expr::make_factorial(three_from_six(s));
        default: return four_or_five_from_seven(t, s);
    }
}

ExprPtr condense_zero(const DigitMultiset& s) {
    if (s.size() < 8) throw std::invalid_argument("condense_zero: need at least 8 digits");
    auto ds = s.sorted_digits();
    size_t half = (ds.size() + 1) / 2;
    DigitMultiset a, b;
    for (size_t i = 0; i < ds.size(); ++i) (i < half ? a : b).add(ds[i]);
    return bin(BinOp::sub, lemma_condense(1, a), lemma_condense(1, b));
}

std::vector<DigitMultiset> exceptional_triples() {
    return {DigitMultiset({4, 6, 8}), DigitMultiset({4, 7, 9}), DigitMultiset({5, 7, 9})};
}

BoundTable dp_delta_bounds(unsigned max_n) {
    if (max_n < 6) throw std::invalid_argument("dp_delta_bounds: max_n must be at least 6");
    static constexpr unsigned kBase[7] = {0, 4, 5, 6, 7, 7, 6};
    BoundTable tbl;
    tbl.max_n = max_n;
    tbl.entries.resize(max_n + 1);
    for (unsigned n = 1; n <= 6; ++n) tbl.entries[n].bound = kBase[n];
    for (unsigned n = 7; n <= max_n; ++n) {
        BoundEntry best;
        best.bound = UINT_MAX;
        for (unsigned a = 1; a <= n / 2; ++a) {
            unsigned c = tbl.entries[a].bound + tbl.entries[n - a].bound;
            if (c < best.bound) best = {c, BoundEntry::Kind::sum, a, n - a};
        }
        for (unsigned a = 2; a * a <= n; ++a) {
            if (n % a != 0) continue;
            unsigned c = tbl.entries[a].bound + tbl.entries[n / a].bound;
            if (c < best.bound) best = {c, BoundEntry::Kind::product, a, n / a};
        }
        tbl.entries[n] = best;
    }
    return tbl;
}

std::vector<int> base6_digits(unsigned long n) {
    if (n == 0) throw std::invalid_argument("base6_digits: n must be positive");
    std::vector<int> out;
    for (; n; n /= 6) out.push_back(static_cast<int>(n % 6));
    return out;
}

RationalInterval log_ratio(unsigned long x, unsigned long base, unsigned prec_bits) {
    if (x < 1 || base < 2) throw std::invalid_argument("log_ratio: need x >= 1 and base >= 2");
    if (prec_bits < 8 || prec_bits > (1u << 20))
        throw std::invalid_argument("log_ratio: precision out of range");
    for (unsigned long p = 1, j = 0;; ++j) {
        if (p == x) {
            ExactValue e(static_cast<long>(j));
            return {e, e};
        }
        if (p > x / base) break;
        p *= base;
    }
    mpfr_t lx, ux, lb, ub, lo, hi;
    mpfr_inits2(prec_bits, lx, ux, lb, ub, lo, hi, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_ui(lx, x, MPFR_RNDD);
    mpfr_log(lx, lx, MPFR_RNDD);
    mpfr_set_ui(ux, x, MPFR_RNDU);
    mpfr_log(ux, ux, MPFR_RNDU);
    mpfr_set_ui(lb, base, MPFR_RNDD);
    mpfr_log(lb, lb, MPFR_RNDD);
    mpfr_set_ui(ub, base, MPFR_RNDU);
    mpfr_log(ub, ub, MPFR_RNDU);
    mpfr_div(lo, lx, ub, MPFR_RNDD);
    mpfr_div(hi, ux, lb, MPFR_RNDU);
    RationalInterval iv{exact_from_mpfr(lo), exact_from_mpfr(hi)};
    mpfr_clears(lx, ux, lb, ub, lo, hi, static_cast<mpfr_ptr>(nullptr));
    return iv;
}

ExactValue log_bound(unsigned long n) {
    RationalInterval iv = log_ratio(n, 6);
    return ExactValue(13) * iv.hi + ExactValue(7);
}

unsigned long floor_n_log10_5(unsigned long n) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 5, n);
    size_t d = mpz_sizeinbase(p.get_mpz_t(), 10);
    mpz_class t;
    mpz_ui_pow_ui(t.get_mpz_t(), 10, d - 1);
    if (t > p) --d;
    return d - 1;
}

unsigned long floor_k_log5_10(unsigned long k) {
    if (k == 0) return 0;
    mpz_class ten_k;
    mpz_ui_pow_ui(ten_k.get_mpz_t(), 10, k);
    unsigned long a = k * 143 / 100;
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 5, a);
    while (p > ten_k) {
        p /= 5;
        --a;
    }
    for (mpz_class next = p * 5; next <= ten_k; next = p * 5) {
        p = next;
        ++a;
    }
    return a;
}

std::string fixed_decimals(const RationalInterval& iv, unsigned places) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
    auto scaled_floor = [&](const ExactValue& v) {
        mpq_class q = v.raw() * mpq_class(scale);
        mpz_class f;
        mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
        return f;
    };
    mpz_class flo = scaled_floor(iv.lo);
    if (flo != scaled_floor(iv.hi)) return {};
    bool neg = flo < 0;
    mpz_class mag = abs(flo);
    std::string frac = mpz_class(mag % scale).get_str();
    std::string out = (neg ? "-" : "") + mpz_class(mag / scale).get_str();
    if (places > 0) out += "." + std::string(places - frac.size(), '0') + frac;
    return out;
}

}  // namespace condense
