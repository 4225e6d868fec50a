#ifndef CONDENSE_SEARCH_HPP
#define CONDENSE_SEARCH_HPP

#include "condense/arith.hpp"
#include "condense/expr.hpp"

#include <deque>
#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

namespace condense {

// Every value reachable from a digit multiset (using all of it), each with the
// first witness found under the deterministic exploration order. Entries keep
// insertion order; the index map serves value lookups.
class ValueTable {
public:
    explicit ValueTable(DigitMultiset ms) : multiset_(std::move(ms)) {}

    const DigitMultiset& multiset() const { return multiset_; }
    const std::vector<std::pair<ExactValue, ExprPtr>>& entries() const { return entries_; }
    size_t size() const { return entries_.size(); }

    // First witness wins; returns true when the value was new.
    bool insert(const ExactValue& v, ExprPtr witness);
    const ExprPtr* find(const ExactValue& v) const;
    bool contains_value(const ExactValue& v) const { return find(v) != nullptr; }

    // Entry indices sorted by value (ascending) for stable output.
    std::vector<size_t> sorted_order() const;

private:
    DigitMultiset multiset_;
    std::vector<std::pair<ExactValue, ExprPtr>> entries_;
    std::unordered_map<ExactValue, size_t, ExactValueHash> index_;
};

// Pairwise-subtraction reduction: replaces two entries a >= b with a-b until
// the requested size is reached. Every intermediate stays a digit 0..9.
enum class PairPolicy : uint8_t { max_pair, min_pair };

struct ReduceStep {
    int a, b, c;  // c = a - b with a >= b
};

struct ReduceResult {
    DigitMultiset reduced;
    std::vector<ReduceStep> steps;
};

// Throws std::invalid_argument unless 1 <= target_size <= |s|.
ReduceResult reduce_to_size(const DigitMultiset& s, uint64_t target_size,
                            PairPolicy policy = PairPolicy::max_pair);

// Rebuilds a witness over the original multiset from a witness over the
// reduced one, expanding each reduced leaf into its subtraction expression.
ExprPtr splice_reduction(const ExprPtr& witness, const DigitMultiset& original,
                         const std::vector<ReduceStep>& steps);

struct FindResult {
    ExprPtr witness;          // null => not found within caps
    // True when the negative verdict covered the entire capped space. Large
    // multisets (|S| >= 6) use restricted partition scans plus reduction
    // routes, so their negatives are search-limited, not exhaustive.
    bool exhaustive = false;

    bool ok() const { return witness != nullptr; }
};

// Search engine for one (caps, rules) configuration. Value tables for small
// multisets and positive/negative find results are memoized and shared across
// queries; all public methods are safe to call concurrently.
class Engine {
public:
    explicit Engine(SearchCaps caps = SearchCaps{}, RuleSet rules = RuleSet{});

    const SearchCaps& caps() const { return caps_; }
    const RuleSet& rules() const { return rules_; }

    // Complete closure table over all proper partitions plus factorial
    // closure. Memoized for |s| <= 3; larger tables are built afresh (cost
    // grows steeply with size).
    std::shared_ptr<const ValueTable> table(const DigitMultiset& s) const;

    ValueTable value_set(const DigitMultiset& s) const { return *table(s); }

    // Target-directed search with early termination. Found witnesses always
    // validate (leaves == s, value == target).
    FindResult find(const DigitMultiset& s, const ExactValue& target) const;

    // Up to `limit` structurally distinct witnesses, deterministic order.
    std::vector<ExprPtr> find_all(const DigitMultiset& s, const ExactValue& target,
                                  size_t limit) const;

    // Certification sweep for one target over every size-k multiset.
    struct Certificate {
        long target = 0;
        unsigned k = 0;
        bool complete = false;                    // every multiset has a witness
        std::vector<ExprPtr> witnesses;           // aligned with all_of_size(k)
        size_t first_missing = SIZE_MAX;          // index of first gap, if any
    };
    Certificate certify(long target, unsigned k, unsigned jobs = 1) const;

    // Values certified to be reachable from EVERY size-k multiset, swept over
    // an integer target range.
    struct UniversalSweep {
        unsigned k = 0;
        long lo = 0, hi = 0;
        std::vector<Certificate> rows;  // one per target, in range order
        std::vector<long> members() const;
    };
    UniversalSweep universal_values(unsigned k, long lo, long hi, unsigned jobs = 1) const;

    // Line-oriented witness cache: "c0,...,c9;value;witness" records under a
    // version header. Loading validates every record against this engine's
    // caps+rules and silently drops invalid lines; saving is atomic
    // (tmp file + rename). Both return the record count.
    size_t load_cache(const std::string& path);
    size_t save_cache(const std::string& path) const;

private:
    struct FindKey {
        uint64_t ms;
        ExactValue target;
        bool operator==(const FindKey& o) const { return ms == o.ms && target == o.target; }
    };
    struct FindKeyHash {
        size_t operator()(const FindKey& k) const {
            return k.target.hash() ^ (k.ms * 0x9e3779b97f4a7c15ULL);
        }
    };
    struct SearchState {
        long budget;
        bool cut = false;
    };

    ValueTable build_table(const DigitMultiset& s) const;
    ExprPtr find_rec(const DigitMultiset& s, const ExactValue& target, SearchState& state) const;
    ExprPtr directional_scan(const DigitMultiset& s,
                             const std::vector<std::pair<ExactValue, int>>& targets,
                             SearchState& state) const;
    ExprPtr reduction_routes(const DigitMultiset& s, const ExactValue& target,
                             SearchState& state) const;
    // Targets reachable from `t` by repeatedly un-applying factorial, BFS
    // order, each with its wrap depth. Front entry is (t, 0).
    std::vector<std::pair<ExactValue, int>> inverse_factorial_targets(const ExactValue& t) const;
    ExprPtr wrap_factorials(ExprPtr w, int depth) const;

    void enum_rec(const DigitMultiset& s, const ExactValue& target, size_t limit,
                  std::vector<ExprPtr>& out, std::vector<std::string>& seen,
                  SearchState& state) const;

    SearchCaps caps_;
    RuleSet rules_;
    std::vector<std::pair<long, ExactValue>> factorials_;  // (k, k!) within caps

    mutable std::shared_mutex table_mutex_;
    mutable std::unordered_map<uint64_t, std::shared_ptr<const ValueTable>> table_memo_;
    mutable std::shared_mutex find_mutex_;
    mutable std::unordered_map<FindKey, ExprPtr, FindKeyHash> find_memo_;  // null = clean negative
};

}  // namespace condense

#endif
