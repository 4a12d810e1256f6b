#pragma once

// Shared fixtures and independent oracles for the test suites. Everything
// here is test-only and deliberately avoids the library's elimination code
// paths where it acts as an oracle.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "lsss/access.hpp"
#include "lsss/field.hpp"
#include "lsss/matrix.hpp"
#include "lsss/msp.hpp"

namespace testsupport {

using lsss::AccessStructure;
using lsss::Field;
using lsss::Int;
using lsss::Matrix;
using lsss::Msp;
using lsss::SeededRng;
using lsss::SubsetMask;

// The worked 4-participant scheme over F_2: basis {{1,2,4},{1,3,4}}
// (1-based), share matrix rows (1,0,1),(0,1,1),(0,1,1),(0,1,0).
inline Msp toy_msp() {
    Field f{Int(2)};
    Matrix h = Matrix::from_rows(f, 3,
                                 {{Int(1), Int(0), Int(1)},
                                  {Int(0), Int(1), Int(1)},
                                  {Int(0), Int(1), Int(1)},
                                  {Int(0), Int(1), Int(0)}});
    return Msp(f, h, {0, 1, 2, 3}, 4);
}

inline AccessStructure toy_structure() {
    return AccessStructure(4, {lsss::mask_of({0, 1, 3}), lsss::mask_of({0, 2, 3})});
}

// Exhaustive span-membership oracle: tries every coefficient vector over
// F_p. Only usable for tiny instances (p^rows combinations).
inline std::optional<std::vector<Int>> exhaustive_span(const Matrix& rows,
                                                       const std::vector<Int>& target) {
    const Field& f = rows.field();
    const std::uint64_t p = static_cast<std::uint64_t>(f.modulus());
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < rows.rows(); ++i) total *= p;
    for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<Int> alpha(rows.rows());
        std::uint64_t c = code;
        for (auto& a : alpha) {
            a = Int(c % p);
            c /= p;
        }
        std::vector<Int> combo(rows.cols(), Int(0));
        for (std::size_t r = 0; r < rows.rows(); ++r) {
            for (std::size_t j = 0; j < rows.cols(); ++j) {
                combo[j] = f.add(combo[j], f.mul(alpha[r], rows.at(r, j)));
            }
        }
        if (combo == target) return alpha;
    }
    return std::nullopt;
}

// Lagrange interpolation at zero: reconstructs a Shamir secret from
// (point, value) pairs without touching the span-program machinery.
inline Int lagrange_at_zero(const Field& f, const std::vector<std::pair<Int, Int>>& shares) {
    Int acc = 0;
    for (std::size_t i = 0; i < shares.size(); ++i) {
        Int num = 1, den = 1;
        for (std::size_t j = 0; j < shares.size(); ++j) {
            if (i == j) continue;
            num = f.mul(num, f.neg(shares[j].first));
            den = f.mul(den, f.sub(shares[i].first, shares[j].first));
        }
        acc = f.add(acc, f.mul(shares[i].second, f.div(num, den)));
    }
    return acc;
}

// Random ideal scheme whose realized structure is connected: uniform
// matrix entries, rejecting samples with a zero row, with the target
// outside the full row span, or realizing a disconnected structure.
inline Msp random_ideal_connected_msp(SeededRng& rng, int n, int d, const Int& p) {
    Field f{p};
    for (;;) {
        Matrix h(f, n, d);
        bool zero_row = false;
        for (int r = 0; r < n; ++r) {
            bool all_zero = true;
            for (int c = 0; c < d; ++c) {
                Int v = rng.element(f);
                h.set(r, c, v);
                if (v != 0) all_zero = false;
            }
            if (all_zero) zero_row = true;
        }
        if (zero_row) continue;
        std::vector<Int> target(d, Int(0));
        target[0] = 1;
        if (!h.solve_in_span(target)) continue;
        std::vector<int> owner(n);
        for (int i = 0; i < n; ++i) owner[i] = i;
        Msp m(f, h, owner, n);
        if (!lsss::realized_structure(m).is_connected()) continue;
        return m;
    }
}

// Deterministic corpus used by several suites: ideal connected schemes
// over F_2/F_3/F_5 with n <= 6 and d <= min(n, 5).
inline std::vector<Msp> msp_corpus(std::size_t count, std::uint64_t seed) {
    SeededRng rng(seed);
    const Int primes[] = {Int(2), Int(3), Int(5)};
    std::vector<Msp> out;
    while (out.size() < count) {
        const Int& p = primes[rng.word() % 3];
        const int n = 2 + static_cast<int>(rng.word() % 5);  // 2..6
        const int d = 2 + static_cast<int>(rng.word() % std::min(n - 1, 4));  // 2..min(n,5)
        out.push_back(random_ideal_connected_msp(rng, n, d, p));
    }
    return out;
}

// Every nonempty unauthorized subset of the realized structure.
inline std::vector<SubsetMask> unauthorized_sets(const AccessStructure& gamma) {
    std::vector<SubsetMask> out;
    for (SubsetMask q = 1; q < (SubsetMask(1) << gamma.n()); ++q) {
        if (!gamma.is_authorized(q)) out.push_back(q);
    }
    return out;
}

}  // namespace testsupport
