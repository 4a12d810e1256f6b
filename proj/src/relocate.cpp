#include "lsss/relocate.hpp"

#include <algorithm>
#include <sstream>

#include "lsss/errors.hpp"

namespace lsss {

const char* method_name(Method m) {
    switch (m) {
        case Method::lc: return "lc";
        case Method::ps: return "ps";
        case Method::is: return "is";
        case Method::cs: return "cs";
    }
    return "?";
}

Method method_from_name(std::string_view name) {
    if (name == "lc") return Method::lc;
    if (name == "ps") return Method::ps;
    if (name == "is") return Method::is;
    if (name == "cs") return Method::cs;
    throw validation_error("unknown relocation method '" + std::string(name) + "'");
}

namespace {

void check_inputs(const Msp& m, SubsetMask q, const ShareVector& shares) {
    if (!m.ideal()) throw validation_error("relocation requires an ideal scheme");
    if ((q & ~full_mask(m.participants())) != 0) {
        throw validation_error("subset references unknown participant");
    }
    if (shares.by_participant.size() != static_cast<std::size_t>(m.participants())) {
        throw validation_error("share vector participant count mismatch");
    }
    for (int i = 0; i < m.participants(); ++i) {
        if (shares.by_participant[i].size() != m.rows_of(i).size()) {
            throw validation_error("share list size mismatch for a participant");
        }
    }
    if (q == 0) return;
    if (popcount(q) == m.participants()) {
        throw validation_error("cannot remove every server");
    }
    if (m.matrix().select_rows(m.rows_of_set(q)).solve_in_span(m.target())) {
        throw unauthorized_error("cannot contract at authorized set");
    }
}

// Flat per-row values for an ideal scheme (row r belongs to participant
// owner_of(r) alone).
std::vector<Int> flat_values(const Msp& m, const ShareVector& shares) {
    std::vector<Int> v(m.row_count());
    for (std::size_t r = 0; r < m.row_count(); ++r) {
        v[r] = shares.by_participant[m.owner_of(r)][0];
    }
    return v;
}

RelocationOutcome identity_outcome(Method method, const Msp& m, const ShareVector& shares) {
    RelocationOutcome out{method, m, {}, {}, {}, {}, {}, {}};
    for (int i = 0; i < m.participants(); ++i) {
        out.index_map.push_back(i);
        out.server_shares.push_back(shares.by_participant[i]);
    }
    return out;
}

std::vector<int> survivor_map(const Msp& m, SubsetMask q) {
    return mask_members(~q & full_mask(m.participants()));
}

}  // namespace

RelocationOutcome relocate_lc(const Msp& m, SubsetMask q, const ShareVector& shares) {
    check_inputs(m, q, shares);
    if (q == 0) return identity_outcome(Method::lc, m, shares);
    const Field& f = m.field();
    auto c = contract_multi(m, q);
    const auto values = flat_values(m, shares);

    RelocationOutcome out{Method::lc, c.msp, c.index_map, {}, m.rows_of_set(q), {}, {}, {}};
    for (std::size_t r : out.q_rows) out.q_values.push_back(values[r]);
    for (std::size_t i = 0; i < c.index_map.size(); ++i) {
        const std::size_t old_row = m.rows_of(c.index_map[i])[0];
        // s'_i = s_i - (h_i)_K U^{-1} (s_w values)
        Int correction = 0;
        for (std::size_t a = 0; a < c.w_rows.size(); ++a) {
            Int coeff = 0;
            for (std::size_t b = 0; b < c.k_cols.size(); ++b) {
                coeff += m.matrix().at(old_row, c.k_cols[b]) * c.u_inverse.at(b, a);
            }
            correction += f.reduce(coeff) * values[c.w_rows[a]];
        }
        out.server_shares.push_back({f.sub(values[old_row], f.reduce(correction))});
    }
    return out;
}

RelocationOutcome relocate_lc_oracle(const Msp& m, SubsetMask q, const ShareVector& shares) {
    check_inputs(m, q, shares);
    if (q == 0) return identity_outcome(Method::lc, m, shares);
    const Field& f = m.field();
    const auto values = flat_values(m, shares);
    const auto q_rows = m.rows_of_set(q);

    // Solve H_Q . v' = s_Q for a vector v' with zero first coordinate; such
    // a vector always exists when Q is unauthorized. Free variables are
    // zero, so v' is supported on the pivot columns.
    std::vector<std::size_t> tail_cols;
    for (std::size_t c = 1; c < m.width(); ++c) tail_cols.push_back(c);
    std::vector<Int> s_q;
    for (std::size_t r : q_rows) s_q.push_back(values[r]);
    const auto x = linear_solve(m.matrix().select_rows(q_rows).select_cols(tail_cols), s_q);
    if (!x) throw validation_error("no zero-secret sharing explains Q's shares");
    std::vector<Int> v_prime(m.width(), Int(0));
    for (std::size_t c = 1; c < m.width(); ++c) v_prime[c] = (*x)[c - 1];

    auto c = contract_multi(m, q);
    RelocationOutcome out{Method::lc, c.msp, c.index_map, {}, q_rows, {}, {}, {}};
    for (std::size_t r : q_rows) out.q_values.push_back(values[r]);
    for (std::size_t i = 0; i < c.index_map.size(); ++i) {
        const std::size_t old_row = m.rows_of(c.index_map[i])[0];
        Int dot = 0;
        for (std::size_t col = 0; col < m.width(); ++col) {
            dot += m.matrix().at(old_row, col) * v_prime[col];
        }
        out.server_shares.push_back({f.sub(values[old_row], f.reduce(dot))});
    }
    return out;
}

RelocationOutcome relocate_ps(const Msp& m, SubsetMask q, const ShareVector& shares) {
    check_inputs(m, q, shares);
    if (q == 0) return identity_outcome(Method::ps, m, shares);
    const auto values = flat_values(m, shares);
    RelocationOutcome out{Method::ps, m, survivor_map(m, q), {}, m.rows_of_set(q), {}, {}, {}};
    for (std::size_t r : out.q_rows) out.q_values.push_back(values[r]);
    out.public_shares = out.q_values;
    for (int old : out.index_map) out.server_shares.push_back(shares.by_participant[old]);
    return out;
}

RelocationOutcome relocate_is(const Msp& m, SubsetMask q, const ShareVector& shares) {
    check_inputs(m, q, shares);
    if (q == 0) return identity_outcome(Method::is, m, shares);
    const Field& f = m.field();
    const auto values = flat_values(m, shares);
    const auto q_rows = m.rows_of_set(q);
    const auto survivors = survivor_map(m, q);
    const int nn = static_cast<int>(survivors.size());
    std::vector<int> new_of(m.participants(), -1);
    for (int i = 0; i < nn; ++i) new_of[survivors[i]] = i;

    // Appended scheme: all original rows plus nn-1 extra copies of Q's
    // block; survivor j holds its own row and copy j of the block (copy 0
    // being Q's rows inside the original matrix).
    const std::size_t extra = q_rows.size() * (nn - 1);
    Matrix h(f, m.row_count() + extra, m.width());
    std::vector<int> owner(m.row_count() + extra);
    for (std::size_t r = 0; r < m.row_count(); ++r) {
        for (std::size_t col = 0; col < m.width(); ++col) h.set(r, col, m.matrix().at(r, col));
        const int old_owner = m.owner_of(r);
        owner[r] = (q >> old_owner & 1) ? 0 : new_of[old_owner];
    }
    std::size_t pos = m.row_count();
    for (int copy = 1; copy < nn; ++copy) {
        for (std::size_t qr : q_rows) {
            for (std::size_t col = 0; col < m.width(); ++col) h.set(pos, col, m.matrix().at(qr, col));
            owner[pos++] = copy;
        }
    }
    Msp appended(f, std::move(h), std::move(owner), nn);

    RelocationOutcome out{Method::is, appended, survivors, {}, q_rows, {}, {}, {}};
    for (std::size_t r : q_rows) out.q_values.push_back(values[r]);
    out.server_shares.resize(nn);
    for (int i = 0; i < nn; ++i) {
        for (std::size_t r : appended.rows_of(i)) {
            out.server_shares[i].push_back(r < m.row_count() ? values[r]
                                                             : values[q_rows[(r - m.row_count()) %
                                                                             q_rows.size()]]);
        }
    }
    return out;
}

RelocationOutcome relocate_cs(const Msp& m, SubsetMask q, const ShareVector& shares,
                              const AccessStructure& gamma) {
    check_inputs(m, q, shares);
    if (gamma.n() != m.participants()) {
        throw validation_error("structure participant count mismatch");
    }
    if (q == 0) return identity_outcome(Method::cs, m, shares);
    const auto values = flat_values(m, shares);
    const auto q_rows = m.rows_of_set(q);
    const auto survivors = survivor_map(m, q);
    const int nn = static_cast<int>(survivors.size());

    RelocationOutcome out{Method::cs, m, survivors, {}, q_rows, {}, {}, {}};
    for (std::size_t r : q_rows) out.q_values.push_back(values[r]);
    out.replica_holders.resize(q_rows.size());

    if (const auto t = gamma.threshold_value()) {
        // Each copy set must meet every surviving (t-m)-subset, so it needs
        // n-t+1 servers; consecutive blocks keep the load balanced.
        const int copies = gamma.n() - *t + 1;
        int cursor = 0;
        for (std::size_t j = 0; j < q_rows.size(); ++j) {
            for (int c = 0; c < copies; ++c) {
                out.replica_holders[j].push_back((cursor + c) % nn);
            }
            std::sort(out.replica_holders[j].begin(), out.replica_holders[j].end());
            cursor = (cursor + copies) % nn;
        }
    } else {
        // One greedy hitting set of the contracted basis holds every copy.
        const auto contracted = gamma.contract(q);
        std::vector<SubsetMask> uncovered = contracted.structure.basis();
        std::vector<int> hitters;
        while (!uncovered.empty()) {
            int best = -1;
            std::size_t best_count = 0;
            for (int s = 0; s < nn; ++s) {
                std::size_t count = 0;
                for (SubsetMask b : uncovered) {
                    if (b >> s & 1) ++count;
                }
                if (count > best_count) {
                    best = s;
                    best_count = count;
                }
            }
            if (best < 0) throw validation_error("contracted structure has an empty basis set");
            hitters.push_back(best);
            std::erase_if(uncovered, [&](SubsetMask b) { return b >> best & 1; });
        }
        std::sort(hitters.begin(), hitters.end());
        for (auto& h : out.replica_holders) h = hitters;
    }

    for (int i = 0; i < nn; ++i) {
        out.server_shares.push_back(shares.by_participant[survivors[i]]);
    }
    for (std::size_t j = 0; j < q_rows.size(); ++j) {
        for (int holder : out.replica_holders[j]) {
            out.server_shares[holder].push_back(out.q_values[j]);
        }
    }
    return out;
}

std::vector<std::size_t> reachable_rows(const RelocationOutcome& out, SubsetMask a) {
    if ((a & ~full_mask(static_cast<int>(out.index_map.size()))) != 0) {
        throw validation_error("subset references unknown server");
    }
    switch (out.method) {
        case Method::lc:
        case Method::is:
            return out.scheme.rows_of_set(a);
        case Method::ps: {
            // own rows plus the public rows
            SubsetMask old_mask = 0;
            for (int i = 0; i < static_cast<int>(out.index_map.size()); ++i) {
                if (a >> i & 1) old_mask |= SubsetMask(1) << out.index_map[i];
            }
            auto rows = out.scheme.rows_of_set(old_mask);
            rows.insert(rows.end(), out.q_rows.begin(), out.q_rows.end());
            std::sort(rows.begin(), rows.end());
            return rows;
        }
        case Method::cs: {
            SubsetMask old_mask = 0;
            for (int i = 0; i < static_cast<int>(out.index_map.size()); ++i) {
                if (a >> i & 1) old_mask |= SubsetMask(1) << out.index_map[i];
            }
            auto rows = out.scheme.rows_of_set(old_mask);
            for (std::size_t j = 0; j < out.q_rows.size(); ++j) {
                const bool held = std::any_of(out.replica_holders[j].begin(),
                                              out.replica_holders[j].end(),
                                              [&](int h) { return a >> h & 1; });
                if (held) rows.push_back(out.q_rows[j]);
            }
            std::sort(rows.begin(), rows.end());
            return rows;
        }
    }
    throw validation_error("bad method tag");
}

Int reconstruct_from(const RelocationOutcome& out, SubsetMask a) {
    const Field& f = out.scheme.field();
    const auto rows = reachable_rows(out, a);
    const auto alpha = out.scheme.matrix().select_rows(rows).solve_in_span(out.scheme.target());
    if (!alpha) throw unauthorized_error("unauthorized set");

    // Value of each reachable row of out.scheme.
    auto value_of = [&](std::size_t row) -> Int {
        switch (out.method) {
            case Method::lc:
                return out.server_shares[out.scheme.owner_of(row)][0];
            case Method::is: {
                const int owner = out.scheme.owner_of(row);
                const auto owned = out.scheme.rows_of(owner);
                const std::size_t pos =
                    std::find(owned.begin(), owned.end(), row) - owned.begin();
                return out.server_shares[owner][pos];
            }
            case Method::ps:
            case Method::cs: {
                const auto it = std::find(out.q_rows.begin(), out.q_rows.end(), row);
                if (it != out.q_rows.end()) return out.q_values[it - out.q_rows.begin()];
                const int old_owner = out.scheme.owner_of(row);
                const auto pos = std::find(out.index_map.begin(), out.index_map.end(), old_owner);
                return out.server_shares[pos - out.index_map.begin()][0];
            }
        }
        throw validation_error("bad method tag");
    };

    Int acc = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) acc += (*alpha)[i] * value_of(rows[i]);
    return f.reduce(acc);
}

StorageMetrics metrics(const RelocationOutcome& out, std::uint64_t share_bits, std::uint64_t z) {
    StorageMetrics sm;
    sm.share_bits = share_bits;
    sm.secret_count = z;
    for (const auto& s : out.server_shares) {
        sm.server_elements += s.size();
        sm.max_server_elements = std::max<std::uint64_t>(sm.max_server_elements, s.size());
    }
    sm.public_elements = out.public_shares.size();
    return sm;
}

std::string metrics_csv_row(Method method, int n, int t, int m, const StorageMetrics& sm) {
    std::ostringstream out;
    out << method_name(method) << "," << n << "," << t << "," << m << "," << sm.share_bits << ","
        << sm.secret_count << "," << sm.total_bits() << ",1/" << sm.rho_inverse();
    return out.str();
}

}  // namespace lsss
