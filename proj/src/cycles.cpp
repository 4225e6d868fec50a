#include "condense/cycles.hpp"

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace condense {
namespace {

// d_{n+1}(j) = 5*P(d_n(j)) + d_n(j-1)/2, with d_n(-1) = 0.
void step_state(const std::vector<int>& cur, std::vector<int>& nxt) {
    for (size_t j = 0; j < cur.size(); ++j)
        nxt[j] = 5 * (cur[j] & 1) + (j == 0 ? 0 : cur[j - 1] / 2);
}

std::vector<int> seed_state(unsigned k) {
    std::vector<int> cur(k + 1, 0);
    cur[0] = 5;  // 5^1
    return cur;
}

}  // namespace

DigitStream digit_stream(unsigned k, unsigned long n_max) {
    if (n_max < 1) throw std::invalid_argument("digit_stream: n_max must be positive");
    DigitStream out;
    out.k = k;
    out.entries.reserve(n_max);
    std::vector<int> cur = seed_state(k), nxt(k + 1);
    for (unsigned long n = 1; n <= n_max; ++n) {
        out.entries.push_back(cur[k]);
        step_state(cur, nxt);
        cur.swap(nxt);
    }
    return out;
}

int digit_oracle(unsigned k, unsigned long n) {
    mpz_class mod, base(5), exp(static_cast<unsigned long>(n)), r;
    mpz_ui_pow_ui(mod.get_mpz_t(), 10, k + 1);
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    mpz_class place;
    mpz_ui_pow_ui(place.get_mpz_t(), 10, k);
    mpz_class digit = (r / place) % 10;
    return static_cast<int>(digit.get_ui());
}

CycleReport cycle_report(unsigned k) {
    if (k < 2 || k > 24) throw std::invalid_argument("cycle_report: k must be in [2, 24]");
    const uint64_t l = uint64_t(1) << (k - 1);
    const uint64_t win_lo = k + 1, win_hi = win_lo + 2 * l;

    std::vector<std::vector<int>> early(k + 1);  // states at n = 1..k+1
    std::vector<uint8_t> window;
    window.reserve(2 * l);
    std::vector<int> cur = seed_state(k), nxt(k + 1);
    unsigned long start = 0;

    for (uint64_t n = 1; n < win_hi; ++n) {
        if (n <= k + 1) early[n - 1] = cur;
        if (n >= win_lo) window.push_back(static_cast<uint8_t>(cur[k]));
        if (start == 0 && n > l && n - l <= k + 1 && cur == early[n - l - 1])
            start = static_cast<unsigned long>(n - l);
        step_state(cur, nxt);
        cur.swap(nxt);
    }
    if (start == 0)
        throw std::runtime_error("verification failed: state at n=" + std::to_string(k + 1) +
                                 " does not recur after one period (k=" + std::to_string(k) + ")");
    for (uint64_t i = 0; i < l; ++i)
        if (window[i] != window[i + l])
            throw std::runtime_error("verification failed: digit mismatch at n=" +
                                     std::to_string(win_lo + i) + " (k=" + std::to_string(k) + ")");

    CycleReport rep;
    rep.k = k;
    rep.start_index = start;
    rep.length = l;
    rep.half_period_shift_verified = true;
    for (uint64_t i = 0; i < l; ++i) {
        int diff = int(window[i + l / 2]) - int(window[i]);
        if (diff != 5 && diff != -5) rep.half_period_shift_verified = false;
        ++rep.counts[window[i]];
    }
    while (rep.leading_zero_count < l && window[rep.leading_zero_count] == 0)
        ++rep.leading_zero_count;
    return rep;
}

ContributionMatrix contribution_matrix() {
    ContributionMatrix m;
    for (int j = 0; j < 10; ++j) {
        m.a[static_cast<size_t>(j / 2)][static_cast<size_t>(j)] = 1;
        m.a[static_cast<size_t>(j / 2 + 5)][static_cast<size_t>(j)] = 1;
    }
    m.u[2] = 1;
    return m;
}

std::array<uint64_t, 10> predicted_counts(unsigned k) {
    if (k < 2 || k > 63) throw std::invalid_argument("predicted_counts: k must be in [2, 63]");
    std::array<uint64_t, 10> v{};
    v[2] = 1;
    for (unsigned s = 1; s < k; ++s) {
        std::array<uint64_t, 10> nx{};
        for (size_t j = 0; j < 10; ++j)
            if (v[j]) {
                nx[j / 2] += v[j];
                nx[j / 2 + 5] += v[j];
            }
        v = nx;
    }
    return v;
}

Mod2Orbit mod2_orbit(unsigned k_max) {
    if (k_max < 7) throw std::invalid_argument("mod2_orbit: k_max must be at least 7");
    Mod2Orbit orb;
    orb.k_max = k_max;
    auto comp_sum = [](const std::array<int, 10>& v) { return v[2] + v[3] + v[6] + v[7]; };
    std::array<int, 10> v{};
    v[2] = 1;
    orb.component_sums.push_back(comp_sum(v));
    for (unsigned k = 2; k <= k_max; ++k) {
        std::array<int, 10> nx{};
        for (size_t j = 0; j < 10; ++j)
            if (v[j]) {
                nx[j / 2] ^= 1;
                nx[j / 2 + 5] ^= 1;
            }
        v = nx;
        orb.residues.push_back(v);
        orb.component_sums.push_back(comp_sum(v));
    }
    orb.period4_from_3 = true;
    for (unsigned k = 3; k + 4 <= k_max; ++k)
        if (orb.residues[k - 2] != orb.residues[k + 2]) orb.period4_from_3 = false;
    orb.all_sums_odd = true;
    for (int s : orb.component_sums)
        if (s % 2 == 0) orb.all_sums_odd = false;
    return orb;
}

LeadingZeroCheck leading_zeros_bound_check(unsigned k) {
    if (k < 2) throw std::invalid_argument("leading_zeros_bound_check: k must be at least 2");
    LeadingZeroCheck chk;
    chk.k = k;
    chk.bound = floor_k_log5_10(k) - k;
    std::vector<int> cur = seed_state(k), nxt(k + 1);
    for (unsigned n = 1; n <= k; ++n) {
        step_state(cur, nxt);
        cur.swap(nxt);
    }
    // cur now holds the state at n = k+1, the window opening C_k
    constexpr uint64_t kScanCap = 10000000;
    while (cur[k] == 0) {
        if (++chk.observed > kScanCap)
            throw std::logic_error("leading_zeros_bound_check: zero prefix exceeds scan cap");
        step_state(cur, nxt);
        cur.swap(nxt);
    }
    chk.ok = chk.observed >= chk.bound;
    return chk;
}

ZeroRun max_zero_run(unsigned long n) {
    DecimalDigits p = pow5_decimal(n);
    const size_t len = p.digits.size();
    ZeroRun best;
    uint64_t run = 0, start = 0;
    for (size_t i = 0; i < len; ++i) {
        if (p.digits[len - 1 - i] == 0) {
            if (run == 0) start = i;
            if (++run > best.length) best = {run, start};
        } else {
            run = 0;
        }
    }
    return best;
}

std::optional<unsigned long> first_exponent_with_run(unsigned r, unsigned long n_limit) {
    if (r < 1) throw std::invalid_argument("first_exponent_with_run: r must be positive");
    mpz_class p(1);
    for (unsigned long n = 1; n <= n_limit; ++n) {
        p *= 5;
        std::string text = p.get_str();
        uint64_t run = 0;
        for (char c : text) {
            run = (c == '0') ? run + 1 : 0;
            if (run >= r) return n;
        }
    }
    return std::nullopt;
}

std::vector<ZeroRunWitness> zero_run_witnesses(unsigned m_max) {
    if (m_max < 2 || m_max > 26)
        throw std::invalid_argument("zero_run_witnesses: m_max must be in [2, 26]");
    std::vector<ZeroRunWitness> out;
    for (unsigned m = 2; m <= m_max; ++m) {
        unsigned long n = m + (1ul << m) + 2;
        ZeroRun run = max_zero_run(n);
        if (!out.empty() && run.length < out.back().run_length)
            throw std::runtime_error("monotonicity violated at m=" + std::to_string(m) +
                                     " (run " + std::to_string(run.length) + " after " +
                                     std::to_string(out.back().run_length) + ")");
        out.push_back({m, n, run.length, run.position});
    }
    return out;
}

}  // namespace condense
