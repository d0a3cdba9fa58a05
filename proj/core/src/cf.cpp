#include "qmfold/cf.hpp"

#include <algorithm>

namespace qmfold {

bool is_valid_cf(const CF& a) {
    for (const Int& q : a)
        if (q < 1) return false;
    return true;
}

bool is_canonical(const CF& a) {
    if (!is_valid_cf(a)) return false;
    if (a.empty()) return true;
    if (a.size() == 1) return true;  // [1] is the value-1 exception
    return a.back() >= 2;
}

CF cf_from_rational(const Rat& x) {
    if (x < 0 || x > 1) throw cf_error("cf_from_rational: value outside [0,1]");
    Int p = x.get_num(), q = x.get_den();
    CF out;
    // x = 1/(a + x') with a = floor(q/p), x' = (q mod p)/p
    while (p != 0) {
        Int a, r;
        mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
        out.push_back(a);
        q = p;
        p = r;
    }
    return out;
}

Rat cf_to_rational(const CF& a) {
    if (!is_valid_cf(a)) throw cf_error("cf_to_rational: quotient < 1");
    Rat x(0);
    for (auto it = a.rbegin(); it != a.rend(); ++it) {
        x += *it;
        x = 1 / x;
    }
    return x;
}

CF canonicalize(CF a) {
    if (!is_valid_cf(a)) throw cf_error("canonicalize: quotient < 1");
    if (a.size() >= 2 && a.back() == 1) {
        a.pop_back();
        a.back() += 1;
    }
    return a;
}

CF other_representation(CF a) {
    if (a.empty() || (a.size() == 1 && a[0] == 1))
        throw cf_error("other_representation: value has a single expansion");
    if (!is_valid_cf(a)) throw cf_error("other_representation: quotient < 1");
    if (a.back() == 1) return canonicalize(std::move(a));
    a.back() -= 1;
    a.emplace_back(1);
    return a;
}

Int continuant(const CF& a) {
    // <> = 1, <a1> = a1, <a1..aj> = aj*<a1..a(j-1)> + <a1..a(j-2)>
    Int prev(0), cur(1);
    for (const Int& q : a) {
        Int next = q * cur + prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

std::vector<std::pair<Rat, Int>> convergents(const CF& a) {
    if (!is_valid_cf(a)) throw cf_error("convergents: quotient < 1");
    std::vector<std::pair<Rat, Int>> out;
    out.reserve(a.size());
    Int p_prev(1), p_cur(0), q_prev(0), q_cur(1);
    for (const Int& q : a) {
        Int p_next = q * p_cur + p_prev;
        Int q_next = q * q_cur + q_prev;
        p_prev = std::move(p_cur);
        q_prev = std::move(q_cur);
        p_cur = std::move(p_next);
        q_cur = std::move(q_next);
        Rat v(p_cur, q_cur);
        v.canonicalize();
        out.emplace_back(std::move(v), q_cur);
    }
    return out;
}

int cf_compare(const CF& a_in, const CF& b_in) {
    // the alternating rule needs the canonical tail; only [.., b, 1] is ambiguous
    const CF a = canonicalize(a_in);
    const CF b = canonicalize(b_in);
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t j = 0; j < n; ++j) {
        if (a[j] == b[j]) continue;
        const bool a_larger = a[j] > b[j];
        // at odd (1-indexed) positions a larger quotient means a smaller value
        const bool odd_pos = (j % 2) == 0;
        return (a_larger == odd_pos) ? -1 : 1;
    }
    if (a.size() == b.size()) return 0;
    // the longer sequence differs from "infinity" at position n
    const bool a_longer = a.size() > b.size();
    const bool odd_pos = (n % 2) == 0;
    // shorter sequence has the larger (infinite) entry at the first gap
    return (a_longer != odd_pos) ? -1 : 1;
}

SeqStats seq_stats(const CF& a) {
    SeqStats s;
    s.sum = 0;
    s.length = a.size();
    for (const Int& q : a) s.sum += q;
    return s;
}

Int quotient_sum(const CF& a) {
    return seq_stats(a).sum;
}

CF concat(CF a, const CF& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

CF reversed(CF a) {
    std::reverse(a.begin(), a.end());
    return a;
}

CF drop_last(CF a) {
    if (a.empty()) throw cf_error("drop_last: empty sequence");
    a.pop_back();
    return a;
}

CF drop_first(const CF& a) {
    if (a.empty()) throw cf_error("drop_first: empty sequence");
    return CF(a.begin() + 1, a.end());
}

}  // namespace qmfold
