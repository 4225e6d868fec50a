#ifndef CONDENSE_EXPR_HPP
#define CONDENSE_EXPR_HPP

#include "condense/arith.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace condense {

// Multiset of decimal digits 0..9, stored as counts. Counts are large enough
// for the digit pool of 5^n at n in the hundreds of thousands.
class DigitMultiset {
public:
    DigitMultiset() : counts_{} {}
    explicit DigitMultiset(const std::vector<int>& digits);

    // "2,3,5" or "235"; rejects anything outside 0..9.
    static std::optional<DigitMultiset> parse(const std::string& text);

    uint32_t count(int digit) const { return counts_[static_cast<size_t>(digit)]; }
    uint64_t size() const;
    bool empty() const { return size() == 0; }

    void add(int digit, uint32_t n = 1) { counts_[static_cast<size_t>(digit)] += n; }
    // False (and no change) if the digit is absent.
    bool remove(int digit, uint32_t n = 1);

    bool contains(const DigitMultiset& sub) const;
    DigitMultiset minus(const DigitMultiset& sub) const;  // caller checks contains()
    DigitMultiset plus(const DigitMultiset& other) const;

    bool operator==(const DigitMultiset&) const = default;

    // Packed counts, usable as a map key for small multisets (every count
    // must be < 64; asserted). Lexicographic on counts.
    uint64_t key() const;

    // Digits in ascending order, with multiplicity.
    std::vector<int> sorted_digits() const;

    std::string to_string() const;  // "{2,3,5}"

    // All sub-multisets (including empty and full), ascending by key.
    std::vector<DigitMultiset> sub_multisets() const;

    // Every multiset of the given size over digits 0..9, in ascending
    // lexicographic order of their sorted digit lists.
    static std::vector<DigitMultiset> all_of_size(unsigned k);

private:
    std::array<uint32_t, 10> counts_;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression tree. Leaves are single digits 0..9; factorial is the
// only unary rule (postfix); no unary minus exists in the game.
struct Expr {
    enum class Kind : uint8_t { leaf, binary, factorial };

    Kind kind;
    int digit = 0;               // leaf
    BinOp op = BinOp::add;       // binary
    ExprPtr left, right;         // binary; factorial uses left only

    static ExprPtr make_leaf(int digit);
    static ExprPtr make_binary(BinOp op, ExprPtr l, ExprPtr r);
    static ExprPtr make_factorial(ExprPtr e);
};

bool expr_equal(const Expr& a, const Expr& b);

struct EvalResult {
    ExactValue value;
    OpError error = OpError::ok;
    const Expr* offender = nullptr;  // deepest failing subtree when !ok()

    bool ok() const { return error == OpError::ok; }
};

// Bottom-up exact evaluation under caps+rules; first failure wins and is
// reported with the offending subtree.
EvalResult evaluate(const Expr& e, const SearchCaps& caps, const RuleSet& rules);

inline EvalResult evaluate(const Expr& e) { return evaluate(e, SearchCaps{}, RuleSet{}); }

// The multiset of digit leaves.
DigitMultiset leaves(const Expr& e);

// Canonical text: minimal parentheses, explicit '*', postfix '!', '^'
// right-associative, no whitespace. parse(render(e)) reproduces e exactly.
std::string render(const Expr& e);

struct ParseResult {
    ExprPtr expr;            // null on failure
    std::string message;     // human-readable error
    size_t position = 0;     // byte offset of the error
    bool multi_digit = false;  // the distinct "multi-digit literal" error

    bool ok() const { return expr != nullptr; }
};

// Recursive-descent parser for the witness grammar. Whitespace is permitted
// and ignored; multi-digit numerals are rejected with a dedicated error.
ParseResult parse(const std::string& text);

}  // namespace condense

#endif
