#include "condense/expr.hpp"

#include <cassert>
#include <stdexcept>

namespace condense {

DigitMultiset::DigitMultiset(const std::vector<int>& digits) : counts_{} {
    for (int d : digits) {
        if (d < 0 || d > 9) throw std::invalid_argument("digit out of range");
        counts_[static_cast<size_t>(d)]++;
    }
}

std::optional<DigitMultiset> DigitMultiset::parse(const std::string& text) {
    DigitMultiset m;
    bool any = false;
    for (char c : text) {
        if (c == ',' || c == ' ') continue;
        if (c < '0' || c > '9') return std::nullopt;
        m.add(c - '0');
        any = true;
    }
    if (!any) return std::nullopt;
    return m;
}

uint64_t DigitMultiset::size() const {
    uint64_t s = 0;
    for (uint32_t c : counts_) s += c;
    return s;
}

bool DigitMultiset::remove(int digit, uint32_t n) {
    auto& c = counts_[static_cast<size_t>(digit)];
    if (c < n) return false;
    c -= n;
    return true;
}

bool DigitMultiset::contains(const DigitMultiset& sub) const {
    for (int d = 0; d < 10; ++d)
        if (sub.counts_[d] > counts_[d]) return false;
    return true;
}

DigitMultiset DigitMultiset::minus(const DigitMultiset& sub) const {
    DigitMultiset r = *this;
    for (int d = 0; d < 10; ++d) {
        assert(r.counts_[d] >= sub.counts_[d]);
        r.counts_[d] -= sub.counts_[d];
    }
    return r;
}

DigitMultiset DigitMultiset::plus(const DigitMultiset& other) const {
    DigitMultiset r = *this;
    for (int d = 0; d < 10; ++d) r.counts_[d] += other.counts_[d];
    return r;
}

uint64_t DigitMultiset::key() const {
    uint64_t k = 0;
    for (int d = 0; d < 10; ++d) {
        assert(counts_[d] < 64);
        k = (k << 6) | counts_[d];
    }
    return k;
}

std::vector<int> DigitMultiset::sorted_digits() const {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(size()));
    for (int d = 0; d < 10; ++d)
        for (uint32_t i = 0; i < counts_[d]; ++i) out.push_back(d);
    return out;
}

std::string DigitMultiset::to_string() const {
    std::string s = "{";
    bool first = true;
    for (int d : sorted_digits()) {
        if (!first) s += ',';
        s += static_cast<char>('0' + d);
        first = false;
    }
    return s + "}";
}

std::vector<DigitMultiset> DigitMultiset::sub_multisets() const {
    std::vector<DigitMultiset> out;
    DigitMultiset cur;
    // Odometer over per-digit counts; digit 9 varies fastest so the
    // resulting key order is ascending.
    while (true) {
        out.push_back(cur);
        int d = 9;
        while (d >= 0) {
            if (cur.counts_[d] < counts_[d]) {
                cur.counts_[d]++;
                break;
            }
            cur.counts_[d] = 0;
            --d;
        }
        if (d < 0) break;
    }
    return out;
}

std::vector<DigitMultiset> DigitMultiset::all_of_size(unsigned k) {
    std::vector<DigitMultiset> out;
    std::vector<int> digits(k, 0);
    if (k == 0) return {DigitMultiset()};
    while (true) {
        out.push_back(DigitMultiset(digits));
        // Next non-decreasing digit string.
        int i = static_cast<int>(k) - 1;
        while (i >= 0 && digits[static_cast<size_t>(i)] == 9) --i;
        if (i < 0) break;
        int v = digits[static_cast<size_t>(i)] + 1;
        for (size_t j = static_cast<size_t>(i); j < k; ++j) digits[j] = v;
    }
    return out;
}

ExprPtr Expr::make_leaf(int digit) {
    assert(digit >= 0 && digit <= 9);
    auto e = std::make_shared<Expr>();
    e->kind = Kind::leaf;
    e->digit = digit;
    return e;
}

ExprPtr Expr::make_binary(BinOp op, ExprPtr l, ExprPtr r) {
    assert(l && r);
    auto e = std::make_shared<Expr>();
    e->kind = Kind::binary;
    e->op = op;
    e->left = std::move(l);
    e->right = std::move(r);
    return e;
}

ExprPtr Expr::make_factorial(ExprPtr inner) {
    assert(inner);
    auto e = std::make_shared<Expr>();
    e->kind = Kind::factorial;
    e->left = std::move(inner);
    return e;
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::leaf: return a.digit == b.digit;
        case Expr::Kind::factorial: return expr_equal(*a.left, *b.left);
        case Expr::Kind::binary:
            return a.op == b.op && expr_equal(*a.left, *b.left) && expr_equal(*a.right, *b.right);
    }
    return false;
}

EvalResult evaluate(const Expr& e, const SearchCaps& caps, const RuleSet& rules) {
    switch (e.kind) {
        case Expr::Kind::leaf:
            return EvalResult{ExactValue(e.digit), OpError::ok, nullptr};
        case Expr::Kind::factorial: {
            EvalResult inner = evaluate(*e.left, caps, rules);
            if (!inner.ok()) return inner;
            OpResult r = apply_factorial(inner.value, caps, rules);
            if (!r.ok()) return EvalResult{ExactValue(), r.error, &e};
            return EvalResult{std::move(r.value), OpError::ok, nullptr};
        }
        case Expr::Kind::binary: {
            EvalResult l = evaluate(*e.left, caps, rules);
            if (!l.ok()) return l;
            EvalResult r = evaluate(*e.right, caps, rules);
            if (!r.ok()) return r;
            OpResult out = apply_binary(e.op, l.value, r.value, caps, rules);
            if (!out.ok()) return EvalResult{ExactValue(), out.error, &e};
            return EvalResult{std::move(out.value), OpError::ok, nullptr};
        }
    }
    return EvalResult{ExactValue(), OpError::undefined, &e};
}

static void collect_leaves(const Expr& e, DigitMultiset& out) {
    switch (e.kind) {
        case Expr::Kind::leaf: out.add(e.digit); return;
        case Expr::Kind::factorial: collect_leaves(*e.left, out); return;
        case Expr::Kind::binary:
            collect_leaves(*e.left, out);
            collect_leaves(*e.right, out);
            return;
    }
}

DigitMultiset leaves(const Expr& e) {
    DigitMultiset m;
    collect_leaves(e, m);
    return m;
}

// Precedence: add/sub 1, mul/div 2, pow 3, factorial 4, leaf 5. '^' is
// right-associative, the others left-associative, '!' postfix.
static int precedence(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::leaf: return 5;
        case Expr::Kind::factorial: return 4;
        case Expr::Kind::binary:
            switch (e.op) {
                case BinOp::add:
                case BinOp::sub: return 1;
                case BinOp::mul:
                case BinOp::div: return 2;
                case BinOp::pow: return 3;
            }
    }
    return 0;
}

static void render_into(const Expr& e, std::string& out) {
    auto child = [&out](const Expr& c, bool parens) {
        if (parens) out += '(';
        render_into(c, out);
        if (parens) out += ')';
    };
    switch (e.kind) {
        case Expr::Kind::leaf:
            out += static_cast<char>('0' + e.digit);
            return;
        case Expr::Kind::factorial:
            child(*e.left, precedence(*e.left) < 4);
            out += '!';
            return;
        case Expr::Kind::binary: {
            int p = precedence(e);
            if (e.op == BinOp::pow) {
                // Right-associative: parenthesize a left child at the same
                // level, keep a right chain bare.
                child(*e.left, precedence(*e.left) <= p);
                out += '^';
                child(*e.right, precedence(*e.right) < p);
            } else {
                child(*e.left, precedence(*e.left) < p);
                out += binop_symbol(e.op);
                child(*e.right, precedence(*e.right) <= p);
            }
            return;
        }
    }
}

std::string render(const Expr& e) {
    std::string out;
    render_into(e, out);
    return out;
}

namespace {

struct Parser {
    const std::string& text;
    size_t pos = 0;
    ParseResult error;  // set on failure
    bool failed = false;

    explicit Parser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    ExprPtr fail(std::string msg, size_t at, bool multi = false) {
        if (!failed) {
            failed = true;
            error.message = std::move(msg);
            error.position = at;
            error.multi_digit = multi;
        }
        return nullptr;
    }

    // expr := term (('+'|'-') term)*
    ExprPtr parse_expr() {
        ExprPtr left = parse_term();
        if (!left) return nullptr;
        while (true) {
            char c = peek();
            if (c != '+' && c != '-') return left;
            ++pos;
            ExprPtr right = parse_term();
            if (!right) return nullptr;
            left = Expr::make_binary(c == '+' ? BinOp::add : BinOp::sub, left, right);
        }
    }

    // term := power (('*'|'/') power)*
    ExprPtr parse_term() {
        ExprPtr left = parse_power();
        if (!left) return nullptr;
        while (true) {
            char c = peek();
            if (c != '*' && c != '/') return left;
            ++pos;
            ExprPtr right = parse_power();
            if (!right) return nullptr;
            left = Expr::make_binary(c == '*' ? BinOp::mul : BinOp::div, left, right);
        }
    }

    // power := postfix ('^' power)?   (right-associative)
    ExprPtr parse_power() {
        ExprPtr base = parse_postfix();
        if (!base) return nullptr;
        if (peek() == '^') {
            ++pos;
            ExprPtr exp = parse_power();
            if (!exp) return nullptr;
            return Expr::make_binary(BinOp::pow, base, exp);
        }
        return base;
    }

    // postfix := atom '!'*
    ExprPtr parse_postfix() {
        ExprPtr e = parse_atom();
        if (!e) return nullptr;
        while (peek() == '!') {
            ++pos;
            e = Expr::make_factorial(e);
        }
        return e;
    }

    // atom := DIGIT | '(' expr ')'
    ExprPtr parse_atom() {
        char c = peek();
        if (c == '(') {
            ++pos;
            ExprPtr inner = parse_expr();
            if (!inner) return nullptr;
            if (peek() != ')') return fail("expected ')'", pos);
            ++pos;
            return inner;
        }
        if (c >= '0' && c <= '9') {
            size_t at = pos;
            ++pos;
            if (pos < text.size() && text[pos] >= '0' && text[pos] <= '9')
                return fail("multi-digit literal", at, true);
            return Expr::make_leaf(c - '0');
        }
        if (c == '\0') return fail("unexpected end of input", pos);
        return fail(std::string("unexpected character '") + c + "'", pos);
    }
};

}  // namespace

ParseResult parse(const std::string& text) {
    Parser p(text);
    ExprPtr e = p.parse_expr();
    if (e) {
        p.skip_ws();
        if (p.pos != text.size()) {
            e = p.fail(std::string("unexpected character '") + text[p.pos] + "'", p.pos);
        }
    }
    if (!e) {
        ParseResult r = p.error;
        r.expr = nullptr;
        return r;
    }
    ParseResult r;
    r.expr = e;
    return r;
}

}  // namespace condense
