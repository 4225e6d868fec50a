#include "condense/search.hpp"

#include "condense/parallel.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace condense {

namespace {

constexpr uint64_t kCompleteTableMax = 3;
constexpr uint64_t kFullPartitionMax = 5;
constexpr uint64_t kReductionFirstMin = 8;
constexpr long kNodeBudget = 4'000'000;
constexpr const char* kCacheHeader = "condense-cache v1";

bool keyable(const DigitMultiset& s) {
    for (int d = 0; d <= 9; ++d)
        if (s.count(d) >= 64) return false;
    return true;
}

ExactValue digit_sum(const DigitMultiset& s) {
    long sum = 0;
    for (int d = 0; d <= 9; ++d) sum += static_cast<long>(d) * s.count(d);
    return ExactValue(sum);
}

// Solves a^e = t for an integer e with |e| <= max_exponent_abs, a not in
// {0, 1, -1}. Bailing once |acc| or den(acc) passes the caps is sound: one of
// the two grows strictly with e, and t itself is admissible.
std::optional<long> solve_exponent(const ExactValue& a, const ExactValue& t,
                                   const SearchCaps& caps) {
    if (t == ExactValue(1)) return 0;
    if (t.is_zero()) return std::nullopt;
    const long cap = static_cast<long>(caps.max_exponent_abs);
    ExactValue acc = a;
    for (long e = 1; e <= cap; ++e) {
        if (acc == t) return e;
        if (acc.abs() > caps.max_magnitude || acc.den() > caps.max_denominator) break;
        if (e < cap) acc = acc * a;
    }
    const ExactValue inv = a.reciprocal();
    acc = inv;
    for (long e = 1; e <= cap; ++e) {
        if (acc == t) return -e;
        if (acc.abs() > caps.max_magnitude || acc.den() > caps.max_denominator) break;
        if (e < cap) acc = acc * inv;
    }
    return std::nullopt;
}

// All b with b^k = v (k >= 1). At most two candidates; positive root first.
std::vector<ExactValue> root_candidates(const ExactValue& v, unsigned k) {
    std::vector<ExactValue> out;
    if (k == 1) {
        out.push_back(v);
        return out;
    }
    const int sgn = v.sign();
    if (sgn == 0) {
        out.push_back(ExactValue(0));
        return out;
    }
    if (sgn < 0 && k % 2 == 0) return out;
    mpz_class an = ::abs(v.num());
    mpz_class ad = v.den();
    mpz_class rn, rd;
    const int exact_n = mpz_root(rn.get_mpz_t(), an.get_mpz_t(), k);
    const int exact_d = mpz_root(rd.get_mpz_t(), ad.get_mpz_t(), k);
    if (!exact_n || !exact_d) return out;
    ExactValue r(sgn < 0 ? mpz_class(-rn) : rn, rd);
    out.push_back(r);
    if (k % 2 == 0) out.push_back(-r);
    return out;
}

enum class AnyPred : uint8_t { any, nonzero, pow_base };

bool pred_matches(AnyPred pred, const ExactValue& v, const RuleSet& rules) {
    switch (pred) {
        case AnyPred::any: return true;
        case AnyPred::nonzero: return !v.is_zero();
        case AnyPred::pow_base: return !v.is_zero() || rules.zero_pow_zero_is_one;
    }
    return false;
}

// Enumerates every complement requirement that would turn the known operand
// value `av` into `tv` under one binary rule. `need(op, a_left, value)` asks
// for an exact complement; `scan(op, a_left, pred)` asks for any complement
// satisfying pred. Either callback returns true to stop.
template <typename NeedFn, typename ScanFn>
bool for_each_complement(const ExactValue& av, const ExactValue& tv, const SearchCaps& caps,
                         const RuleSet& rules, NeedFn&& need, ScanFn&& scan) {
    const ExactValue zero(0), one(1);
    if (rules.allow_add) {
        if (need(BinOp::add, true, tv - av)) return true;
    }
    if (rules.allow_sub) {
        if (need(BinOp::sub, true, av - tv)) return true;
        if (need(BinOp::sub, false, tv + av)) return true;
    }
    if (rules.allow_mul) {
        if (!av.is_zero()) {
            if (need(BinOp::mul, true, tv / av)) return true;
        } else if (tv.is_zero()) {
            if (scan(BinOp::mul, true, AnyPred::any)) return true;
        }
    }
    if (rules.allow_div) {
        if (!tv.is_zero()) {
            if (!av.is_zero()) {
                if (need(BinOp::div, true, av / tv)) return true;
                if (need(BinOp::div, false, tv * av)) return true;
            }
        } else if (av.is_zero()) {
            if (scan(BinOp::div, true, AnyPred::nonzero)) return true;
        } else {
            if (need(BinOp::div, false, zero)) return true;
        }
    }
    if (rules.allow_pow) {
        const long cap = static_cast<long>(caps.max_exponent_abs);
        if (av.is_zero()) {
            if (tv.is_zero()) {
                for (long j = 1; j <= cap; ++j)
                    if (need(BinOp::pow, true, ExactValue(j))) return true;
            } else if (tv == one && rules.zero_pow_zero_is_one) {
                if (need(BinOp::pow, true, zero)) return true;
            }
        } else if (av == one) {
            if (tv == one) {
                if (need(BinOp::pow, true, zero)) return true;
                for (long j = 1; j <= cap; ++j) {
                    if (need(BinOp::pow, true, ExactValue(j))) return true;
                    if (need(BinOp::pow, true, ExactValue(-j))) return true;
                }
            }
        } else if (av == -one) {
            if (tv == one) {
                for (long j = 0; j <= cap; j += 2) {
                    if (need(BinOp::pow, true, ExactValue(j))) return true;
                    if (j > 0 && need(BinOp::pow, true, ExactValue(-j))) return true;
                }
            } else if (tv == -one) {
                for (long j = 1; j <= cap; j += 2) {
                    if (need(BinOp::pow, true, ExactValue(j))) return true;
                    if (need(BinOp::pow, true, ExactValue(-j))) return true;
                }
            }
        } else {
            if (auto e = solve_exponent(av, tv, caps))
                if (need(BinOp::pow, true, ExactValue(*e))) return true;
        }
        if (av.is_integer() && av.fits_long()) {
            const long e = av.to_long();
            if (e >= -cap && e <= cap) {
                if (e == 0) {
                    if (tv == one && scan(BinOp::pow, false, AnyPred::pow_base)) return true;
                } else if (e == 1) {
                    if (need(BinOp::pow, false, tv)) return true;
                } else {
                    bool usable = true;
                    ExactValue rt = tv;
                    if (e < 0) {
                        if (tv.is_zero()) usable = false;
                        else rt = tv.reciprocal();
                    }
                    if (usable) {
                        const unsigned deg = static_cast<unsigned>(e < 0 ? -e : e);
                        for (const auto& r : root_candidates(rt, deg))
                            if (need(BinOp::pow, false, r)) return true;
                    }
                }
            }
        }
    }
    return false;
}

// Small partition sides in fixed order: by size, then by packed-count key.
// Full mode emits every sub-multiset up to half the size (deduplicating the
// balanced splits); restricted mode emits only sizes 1 and 2.
std::vector<DigitMultiset> small_sides(const DigitMultiset& s) {
    const uint64_t n = s.size();
    std::vector<DigitMultiset> sides;
    if (n <= kFullPartitionMax) {
        const uint64_t half = n / 2;
        for (const auto& a : s.sub_multisets()) {
            if (a.empty() || a.size() > half) continue;
            if (a.size() * 2 == n && a.key() > s.minus(a).key()) continue;
            sides.push_back(a);
        }
    } else {
        for (int d = 0; d <= 9; ++d) {
            if (!s.count(d)) continue;
            sides.push_back(DigitMultiset(std::vector<int>{d}));
            for (int e = d; e <= 9; ++e) {
                const uint32_t needed = (e == d) ? 2u : 1u;
                if (s.count(e) >= needed)
                    sides.push_back(DigitMultiset(std::vector<int>{d, e}));
            }
        }
    }
    std::sort(sides.begin(), sides.end(), [](const DigitMultiset& x, const DigitMultiset& y) {
        if (x.size() != y.size()) return x.size() < y.size();
        return x.key() < y.key();
    });
    return sides;
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace

bool ValueTable::insert(const ExactValue& v, ExprPtr witness) {
    auto [it, fresh] = index_.emplace(v, entries_.size());
    if (!fresh) return false;
    entries_.emplace_back(v, std::move(witness));
    return true;
}

const ExprPtr* ValueTable::find(const ExactValue& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) return nullptr;
    return &entries_[it->second].second;
}

std::vector<size_t> ValueTable::sorted_order() const {
    std::vector<size_t> idx(entries_.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](size_t x, size_t y) { return entries_[x].first < entries_[y].first; });
    return idx;
}

ReduceResult reduce_to_size(const DigitMultiset& s, uint64_t target_size, PairPolicy policy) {
    if (target_size < 1 || target_size > s.size())
        throw std::invalid_argument("reduce_to_size: target size out of range");
    ReduceResult r;
    r.reduced = s;
    while (r.reduced.size() > target_size) {
        int a = -1, b = -1;
        if (policy == PairPolicy::max_pair) {
            for (int d = 9; d >= 0 && b < 0; --d) {
                uint32_t c = r.reduced.count(d);
                while (c-- && b < 0) {
                    if (a < 0) a = d;
                    else b = d;
                }
            }
        } else {
            for (int d = 0; d <= 9 && b < 0; ++d) {
                uint32_t c = r.reduced.count(d);
                while (c-- && b < 0) {
                    if (a >= 0) b = a;
                    a = d;
                }
            }
        }
        if (a < b) std::swap(a, b);
        const int c = a - b;
        r.reduced.remove(a);
        r.reduced.remove(b);
        r.reduced.add(c);
        r.steps.push_back(ReduceStep{a, b, c});
    }
    return r;
}

namespace {

ExprPtr splice_leaves(const ExprPtr& e, std::array<std::deque<ExprPtr>, 10>& pool) {
    switch (e->kind) {
        case Expr::Kind::leaf: {
            auto& q = pool[static_cast<size_t>(e->digit)];
            if (q.empty())
                throw std::invalid_argument("splice_reduction: witness does not match reduction");
            ExprPtr frag = q.front();
            q.pop_front();
            return frag;
        }
        case Expr::Kind::binary: {
            ExprPtr l = splice_leaves(e->left, pool);
            ExprPtr r = splice_leaves(e->right, pool);
            return Expr::make_binary(e->op, std::move(l), std::move(r));
        }
        case Expr::Kind::factorial:
            return Expr::make_factorial(splice_leaves(e->left, pool));
    }
    throw std::logic_error("splice_reduction: bad expression kind");
}

}  // namespace

ExprPtr splice_reduction(const ExprPtr& witness, const DigitMultiset& original,
                         const std::vector<ReduceStep>& steps) {
    if (!witness) throw std::invalid_argument("splice_reduction: null witness");
    std::array<std::deque<ExprPtr>, 10> pool;
    for (int d = 0; d <= 9; ++d)
        for (uint32_t i = 0; i < original.count(d); ++i)
            pool[static_cast<size_t>(d)].push_back(Expr::make_leaf(d));
    for (const auto& st : steps) {
        if (st.a < 0 || st.a > 9 || st.b < 0 || st.b > st.a || st.c != st.a - st.b)
            throw std::invalid_argument("splice_reduction: malformed step");
        auto& qa = pool[static_cast<size_t>(st.a)];
        auto& qb = pool[static_cast<size_t>(st.b)];
        if (qa.empty() || (st.a == st.b ? qa.size() < 2 : qb.empty()))
            throw std::invalid_argument("splice_reduction: steps do not replay over the multiset");
        ExprPtr fa = qa.front();
        qa.pop_front();
        ExprPtr fb = qb.front();
        qb.pop_front();
        pool[static_cast<size_t>(st.c)].push_back(Expr::make_binary(BinOp::sub, fa, fb));
    }
    ExprPtr full = splice_leaves(witness, pool);
    for (const auto& q : pool)
        if (!q.empty())
            throw std::invalid_argument("splice_reduction: witness does not cover the multiset");
    return full;
}

Engine::Engine(SearchCaps caps, RuleSet rules) : caps_(std::move(caps)), rules_(rules) {
    caps_.validate();
    if (rules_.allow_fact) {
        for (unsigned k = 0; k <= caps_.max_factorial_arg; ++k) {
            OpResult r = apply_factorial(ExactValue(static_cast<long>(k)), caps_, rules_);
            if (r.ok()) factorials_.emplace_back(static_cast<long>(k), r.value);
        }
    }
}

ValueTable Engine::build_table(const DigitMultiset& s) const {
    ValueTable t(s);
    if (s.empty()) return t;
    if (s.size() == 1) {
        const int d = s.sorted_digits()[0];
        t.insert(ExactValue(d), Expr::make_leaf(d));
    } else {
        for (const auto& a_set : s.sub_multisets()) {
            if (a_set.empty() || a_set.size() == s.size()) continue;
            const DigitMultiset b_set = s.minus(a_set);
            if (a_set.key() > b_set.key()) continue;
            auto ta = table(a_set);
            auto tb = table(b_set);
            auto try_op = [&](BinOp op, const ExactValue& x, const ExprPtr& xw,
                              const ExactValue& y, const ExprPtr& yw) {
                OpResult r = apply_binary(op, x, y, caps_, rules_);
                if (r.ok()) t.insert(r.value, Expr::make_binary(op, xw, yw));
            };
            for (const auto& ea : ta->entries()) {
                for (const auto& eb : tb->entries()) {
                    const ExactValue& av = ea.first;
                    const ExactValue& bv = eb.first;
                    const ExprPtr& aw = ea.second;
                    const ExprPtr& bw = eb.second;
                    try_op(BinOp::add, av, aw, bv, bw);
                    try_op(BinOp::sub, av, aw, bv, bw);
                    try_op(BinOp::sub, bv, bw, av, aw);
                    try_op(BinOp::mul, av, aw, bv, bw);
                    try_op(BinOp::div, av, aw, bv, bw);
                    try_op(BinOp::div, bv, bw, av, aw);
                    try_op(BinOp::pow, av, aw, bv, bw);
                    try_op(BinOp::pow, bv, bw, av, aw);
                }
            }
        }
    }
    if (rules_.allow_fact) {
        for (size_t i = 0; i < t.size(); ++i) {
            const auto entry = t.entries()[i];  // copy: entries() grows during the sweep
            OpResult r = apply_factorial(entry.first, caps_, rules_);
            if (r.ok()) t.insert(r.value, Expr::make_factorial(entry.second));
        }
    }
    return t;
}

std::shared_ptr<const ValueTable> Engine::table(const DigitMultiset& s) const {
    const bool memoize = s.size() <= kCompleteTableMax;
    uint64_t key = 0;
    if (memoize) {
        key = s.key();
        std::shared_lock lk(table_mutex_);
        auto it = table_memo_.find(key);
        if (it != table_memo_.end()) return it->second;
    }
    auto built = std::make_shared<const ValueTable>(build_table(s));
    if (memoize) {
        std::unique_lock lk(table_mutex_);
        auto [it, fresh] = table_memo_.emplace(key, built);
        return it->second;
    }
    return built;
}

std::vector<std::pair<ExactValue, int>> Engine::inverse_factorial_targets(
    const ExactValue& t) const {
    std::vector<std::pair<ExactValue, int>> out;
    out.emplace_back(t, 0);
    if (!rules_.allow_fact) return out;
    for (size_t i = 0; i < out.size(); ++i) {
        const ExactValue v = out[i].first;
        const int depth = out[i].second;
        for (const auto& [k, fk] : factorials_) {
            if (fk != v) continue;
            const ExactValue kv(k);
            bool seen = false;
            for (const auto& e : out)
                if (e.first == kv) {
                    seen = true;
                    break;
                }
            if (!seen) out.emplace_back(kv, depth + 1);
        }
    }
    return out;
}

ExprPtr Engine::wrap_factorials(ExprPtr w, int depth) const {
    for (int i = 0; i < depth; ++i) w = Expr::make_factorial(std::move(w));
    return w;
}

ExprPtr Engine::directional_scan(const DigitMultiset& s,
                                 const std::vector<std::pair<ExactValue, int>>& targets,
                                 SearchState& state) const {
    const std::vector<DigitMultiset> sides = small_sides(s);
    for (const auto& [tv, depth] : targets) {
        for (const auto& a_set : sides) {
            if (state.cut) return nullptr;
            const DigitMultiset b_set = s.minus(a_set);
            auto ta = table(a_set);
            const bool b_small = b_set.size() <= kCompleteTableMax;
            std::shared_ptr<const ValueTable> tb;
            if (b_small) tb = table(b_set);

            for (const auto& entry : ta->entries()) {
                const ExactValue& av = entry.first;
                const ExprPtr& aw = entry.second;
                ExprPtr found;

                auto attempt = [&](BinOp op, bool a_left, const ExactValue& nv) -> bool {
                    if (state.cut) return true;
                    if (--state.budget <= 0) {
                        state.cut = true;
                        return true;
                    }
                    if (!caps_.admits(nv)) return false;
                    ExprPtr bw;
                    if (b_small) {
                        if (const ExprPtr* hit = tb->find(nv)) bw = *hit;
                    } else {
                        bw = find_rec(b_set, nv, state);
                    }
                    if (!bw) return false;
                    OpResult chk = apply_binary(op, a_left ? av : nv, a_left ? nv : av,
                                                caps_, rules_);
                    if (!chk.ok() || chk.value != tv) return false;
                    found = Expr::make_binary(op, a_left ? aw : bw, a_left ? bw : aw);
                    return true;
                };
                auto scan = [&](BinOp op, bool a_left, AnyPred pred) -> bool {
                    if (b_small) {
                        for (const auto& be : tb->entries()) {
                            if (state.cut) return true;
                            if (!pred_matches(pred, be.first, rules_)) continue;
                            if (attempt(op, a_left, be.first)) return true;
                        }
                        return false;
                    }
                    // Recursive complements cannot be scanned; probe values the
                    // complement always reaches (its digit sum via a plain
                    // addition chain) plus the two conventional constants.
                    const ExactValue probes[] = {digit_sum(b_set), ExactValue(1), ExactValue(0)};
                    for (const auto& p : probes) {
                        if (!pred_matches(pred, p, rules_)) continue;
                        if (attempt(op, a_left, p)) return true;
                    }
                    return false;
                };

                if (for_each_complement(av, tv, caps_, rules_, attempt, scan) && found)
                    return wrap_factorials(std::move(found), depth);
                if (state.cut) return nullptr;
            }
        }
    }
    return nullptr;
}

ExprPtr Engine::reduction_routes(const DigitMultiset& s, const ExactValue& target,
                                 SearchState& state) const {
    struct Route {
        PairPolicy policy;
        uint64_t size;
    };
    static constexpr Route kRoutes[] = {{PairPolicy::max_pair, 5},
                                        {PairPolicy::max_pair, 4},
                                        {PairPolicy::min_pair, 5}};
    for (const auto& route : kRoutes) {
        if (state.cut) return nullptr;
        if (s.size() <= route.size) continue;
        ReduceResult rr = reduce_to_size(s, route.size, route.policy);
        if (ExprPtr w = find_rec(rr.reduced, target, state))
            return splice_reduction(w, s, rr.steps);
    }
    return nullptr;
}

ExprPtr Engine::find_rec(const DigitMultiset& s, const ExactValue& target,
                         SearchState& state) const {
    if (!caps_.admits(target)) return nullptr;
    const uint64_t n = s.size();
    if (n == 0) return nullptr;
    if (n <= kCompleteTableMax) {
        auto tb = table(s);
        const ExprPtr* hit = tb->find(target);
        return hit ? *hit : nullptr;
    }
    const bool memoizable = keyable(s);
    FindKey key{0, target};
    if (memoizable) {
        key.ms = s.key();
        std::shared_lock lk(find_mutex_);
        auto it = find_memo_.find(key);
        if (it != find_memo_.end()) return it->second;
    }
    if (state.cut || --state.budget <= 0) {
        state.cut = true;
        return nullptr;
    }

    const auto targets = inverse_factorial_targets(target);
    ExprPtr got;
    if (n >= kReductionFirstMin) got = reduction_routes(s, target, state);
    if (!got) got = directional_scan(s, targets, state);
    if (!got && n > kFullPartitionMax && n < kReductionFirstMin)
        got = reduction_routes(s, target, state);

    // Negatives are only memoized when the verdict is budget-independent.
    if (memoizable && (got || !state.cut)) {
        std::unique_lock lk(find_mutex_);
        find_memo_.emplace(key, got);
    }
    return got;
}

FindResult Engine::find(const DigitMultiset& s, const ExactValue& target) const {
    if (s.empty()) throw std::invalid_argument("find: empty multiset");
    SearchState state{kNodeBudget, false};
    ExprPtr w = find_rec(s, target, state);
    if (w) {
        EvalResult ev = evaluate(*w, caps_, rules_);
        if (!ev.ok() || ev.value != target || !(leaves(*w) == s))
            throw std::logic_error("find: witness failed validation");
    }
    FindResult result;
    result.witness = std::move(w);
    result.exhaustive = !result.witness && s.size() <= kFullPartitionMax && !state.cut;
    return result;
}

void Engine::enum_rec(const DigitMultiset& s, const ExactValue& target, size_t limit,
                      std::vector<ExprPtr>& out, std::vector<std::string>& seen,
                      SearchState& state) const {
    if (out.size() >= limit || state.cut || !caps_.admits(target)) return;
    const uint64_t n = s.size();
    if (n == 0) return;

    auto emit = [&](ExprPtr w) {
        std::string text = render(*w);
        if (std::find(seen.begin(), seen.end(), text) != seen.end()) return;
        seen.push_back(std::move(text));
        out.push_back(std::move(w));
    };

    if (n == 1) {
        const int digit = s.sorted_digits()[0];
        ExprPtr w = Expr::make_leaf(digit);
        ExactValue v(digit);
        while (out.size() < limit) {
            if (v == target) emit(w);
            OpResult nx = apply_factorial(v, caps_, rules_);
            if (!nx.ok()) return;
            if (nx.value == v && v != target) return;  // 1 and 2 are factorial fixpoints
            v = nx.value;
            w = Expr::make_factorial(std::move(w));
        }
        return;
    }

    const auto targets = inverse_factorial_targets(target);
    const std::vector<DigitMultiset> sides = small_sides(s);
    for (const auto& [tv, depth] : targets) {
        for (const auto& a_set : sides) {
            if (out.size() >= limit || state.cut) return;
            const DigitMultiset b_set = s.minus(a_set);
            auto ta = table(a_set);
            for (const auto& entry : ta->entries()) {
                const ExactValue& av = entry.first;
                std::vector<ExprPtr> a_wits;
                if (a_set.size() == 1) {
                    a_wits.push_back(entry.second);
                } else {
                    std::vector<std::string> sub_seen;
                    enum_rec(a_set, av, limit, a_wits, sub_seen, state);
                }
                for (const ExprPtr& aw : a_wits) {
                    auto try_need = [&](BinOp op, bool a_left, const ExactValue& nv) -> bool {
                        if (out.size() >= limit || state.cut) return true;
                        if (--state.budget <= 0) {
                            state.cut = true;
                            return true;
                        }
                        if (!caps_.admits(nv)) return false;
                        OpResult chk = apply_binary(op, a_left ? av : nv, a_left ? nv : av,
                                                    caps_, rules_);
                        if (!chk.ok() || chk.value != tv) return false;
                        std::vector<ExprPtr> b_wits;
                        std::vector<std::string> b_seen;
                        enum_rec(b_set, nv, limit, b_wits, b_seen, state);
                        for (const ExprPtr& bw : b_wits) {
                            emit(wrap_factorials(
                                Expr::make_binary(op, a_left ? aw : bw, a_left ? bw : aw), depth));
                            if (out.size() >= limit) return true;
                        }
                        return out.size() >= limit || state.cut;
                    };
                    auto try_scan = [&](BinOp op, bool a_left, AnyPred pred) -> bool {
                        const ExactValue probes[] = {digit_sum(b_set), ExactValue(1),
                                                     ExactValue(0)};
                        for (const auto& p : probes) {
                            if (!pred_matches(pred, p, rules_)) continue;
                            if (try_need(op, a_left, p)) return true;
                        }
                        return false;
                    };
                    for_each_complement(av, tv, caps_, rules_, try_need, try_scan);
                    if (out.size() >= limit || state.cut) return;
                }
            }
        }
    }

    if (n > kFullPartitionMax && out.size() < limit && !state.cut) {
        struct Route {
            PairPolicy policy;
            uint64_t size;
        };
        static constexpr Route kRoutes[] = {{PairPolicy::max_pair, 5},
                                            {PairPolicy::max_pair, 4},
                                            {PairPolicy::min_pair, 5}};
        for (const auto& route : kRoutes) {
            if (out.size() >= limit || state.cut) return;
            if (s.size() <= route.size) continue;
            ReduceResult rr = reduce_to_size(s, route.size, route.policy);
            if (ExprPtr w = find_rec(rr.reduced, target, state))
                emit(splice_reduction(w, s, rr.steps));
        }
    }
}

std::vector<ExprPtr> Engine::find_all(const DigitMultiset& s, const ExactValue& target,
                                      size_t limit) const {
    if (s.empty()) throw std::invalid_argument("find_all: empty multiset");
    std::vector<ExprPtr> out;
    if (limit == 0) return out;
    std::vector<std::string> seen;
    SearchState state{kNodeBudget, false};
    enum_rec(s, target, limit, out, seen, state);
    for (const auto& w : out) {
        EvalResult ev = evaluate(*w, caps_, rules_);
        if (!ev.ok() || ev.value != target || !(leaves(*w) == s))
            throw std::logic_error("find_all: witness failed validation");
    }
    return out;
}

Engine::Certificate Engine::certify(long target, unsigned k, unsigned jobs) const {
    if (k == 0) throw std::invalid_argument("certify: k must be positive");
    Certificate cert;
    cert.target = target;
    cert.k = k;
    const auto sets = DigitMultiset::all_of_size(k);
    cert.witnesses.assign(sets.size(), nullptr);
    const ExactValue tv(target);
    parallel_for(sets.size(), jobs,
                 [&](size_t i) { cert.witnesses[i] = find(sets[i], tv).witness; });
    cert.complete = true;
    for (size_t i = 0; i < cert.witnesses.size(); ++i) {
        if (!cert.witnesses[i]) {
            cert.complete = false;
            cert.first_missing = i;
            break;
        }
    }
    return cert;
}

Engine::UniversalSweep Engine::universal_values(unsigned k, long lo, long hi,
                                                unsigned jobs) const {
    if (hi < lo) throw std::invalid_argument("universal_values: empty range");
    UniversalSweep sweep;
    sweep.k = k;
    sweep.lo = lo;
    sweep.hi = hi;
    for (long t = lo; t <= hi; ++t) sweep.rows.push_back(certify(t, k, jobs));
    return sweep;
}

std::vector<long> Engine::UniversalSweep::members() const {
    std::vector<long> out;
    for (const auto& row : rows)
        if (row.complete) out.push_back(row.target);
    return out;
}

size_t Engine::load_cache(const std::string& path) {
    std::ifstream in(path);
    if (!in) return 0;
    std::string line;
    bool header_seen = false;
    size_t accepted = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != kCacheHeader) return 0;
            header_seen = true;
            continue;
        }
        const auto fields = split_fields(line, ';');
        if (fields.size() != 3) continue;
        const auto counts = split_fields(fields[0], ',');
        if (counts.size() != 10) continue;
        DigitMultiset ms;
        bool counts_ok = true;
        for (int d = 0; d <= 9 && counts_ok; ++d) {
            const std::string& c = counts[static_cast<size_t>(d)];
            if (c.empty() || c.size() > 2 ||
                !std::all_of(c.begin(), c.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
                counts_ok = false;
                break;
            }
            const int v = std::stoi(c);
            if (v >= 64) {
                counts_ok = false;
                break;
            }
            ms.add(d, static_cast<uint32_t>(v));
        }
        if (!counts_ok) continue;
        const auto value = ExactValue::parse(fields[1]);
        if (!value) continue;
        ParseResult pr = parse(fields[2]);
        if (!pr.ok()) continue;
        EvalResult ev = evaluate(*pr.expr, caps_, rules_);
        if (!ev.ok() || ev.value != *value) continue;
        if (!(leaves(*pr.expr) == ms)) continue;
        if (ms.size() <= kCompleteTableMax) continue;  // table territory; nothing to seed
        FindKey key{ms.key(), *value};
        {
            std::unique_lock lk(find_mutex_);
            find_memo_.emplace(key, pr.expr);
        }
        ++accepted;
    }
    return accepted;
}

size_t Engine::save_cache(const std::string& path) const {
    std::vector<std::string> lines;
    {
        std::shared_lock lk(find_mutex_);
        lines.reserve(find_memo_.size());
        for (const auto& [key, wit] : find_memo_) {
            if (!wit) continue;
            std::string line;
            for (int d = 0; d <= 9; ++d) {
                if (d) line += ',';
                line += std::to_string((key.ms >> (6 * (9 - d))) & 0x3f);
            }
            line += ';';
            line += key.target.to_string();
            line += ';';
            line += render(*wit);
            lines.push_back(std::move(line));
        }
    }
    std::sort(lines.begin(), lines.end());
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("save_cache: cannot write " + tmp);
        out << kCacheHeader << '\n';
        for (const auto& line : lines) out << line << '\n';
    }
    std::filesystem::rename(tmp, path);
    return lines.size();
}

}  // namespace condense
