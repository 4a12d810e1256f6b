#include "lsss/msp.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "lsss/errors.hpp"

namespace lsss {

Msp::Msp(Field field, Matrix share_matrix, std::vector<int> row_owner, int participants)
    : field_(std::move(field)),
      h_(std::move(share_matrix)),
      row_owner_(std::move(row_owner)),
      participants_(participants) {
    if (!(h_.field() == field_)) throw validation_error("share matrix field mismatch");
    if (h_.rows() == 0 || h_.cols() == 0) throw validation_error("share matrix must be nonempty");
    if (row_owner_.size() != h_.rows()) throw validation_error("row map size mismatch");
    if (participants_ < 1) throw validation_error("participant count must be positive");
    std::vector<bool> hit(participants_, false);
    for (int owner : row_owner_) {
        if (owner < 0 || owner >= participants_) throw validation_error("row owner out of range");
        hit[owner] = true;
    }
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) {
        throw validation_error("row map must be surjective onto participants");
    }
}

std::vector<Int> Msp::target() const {
    std::vector<Int> t(width(), Int(0));
    t[0] = 1;
    return t;
}

bool Msp::ideal() const {
    if (row_count() != static_cast<std::size_t>(participants_)) return false;
    std::vector<bool> seen(participants_, false);
    for (int owner : row_owner_) {
        if (seen[owner]) return false;
        seen[owner] = true;
    }
    return true;
}

std::vector<std::size_t> Msp::rows_of(int participant) const {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < row_count(); ++r) {
        if (row_owner_[r] == participant) out.push_back(r);
    }
    return out;
}

std::vector<std::size_t> Msp::rows_of_set(SubsetMask a) const {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < row_count(); ++r) {
        if (a >> row_owner_[r] & 1) out.push_back(r);
    }
    return out;
}

Msp Msp::shamir(int t, int n, const Int& p, const std::optional<std::vector<Int>>& xs) {
    if (t < 1 || t > n) throw validation_error("shamir needs 1 <= t <= n");
    Field f(p);
    if (p <= n) throw validation_error("shamir needs modulus > participant count");
    std::vector<Int> points;
    if (xs) {
        points = *xs;
        if (points.size() != static_cast<std::size_t>(n)) {
            throw validation_error("shamir needs one evaluation point per participant");
        }
        std::set<Int> distinct;
        for (auto& x : points) {
            x = f.reduce(x);
            if (x == 0) throw validation_error("shamir evaluation points must be nonzero");
            if (!distinct.insert(x).second) {
                throw validation_error("shamir evaluation points must be distinct");
            }
        }
    } else {
        for (int i = 1; i <= n; ++i) points.emplace_back(i);
    }
    Matrix h(f, n, t);
    for (int i = 0; i < n; ++i) {
        Int pw = 1;
        for (int j = 0; j < t; ++j) {
            h.set(i, j, pw);
            pw = f.mul(pw, points[i]);
        }
    }
    std::vector<int> owner(n);
    for (int i = 0; i < n; ++i) owner[i] = i;
    return Msp(std::move(f), std::move(h), std::move(owner), n);
}

bool Msp::operator==(const Msp& other) const {
    return field_ == other.field_ && h_ == other.h_ && row_owner_ == other.row_owner_ &&
           participants_ == other.participants_;
}

Sharing share(const Msp& m, const Int& secret, SeededRng& rng) {
    std::vector<Int> tail(m.width() - 1);
    for (auto& r : tail) r = rng.element(m.field());
    return share_with(m, secret, std::move(tail));
}

std::vector<Int> row_values(const Msp& m, const Int& secret, const std::vector<Int>& randomness) {
    if (randomness.size() != m.width() - 1) {
        throw validation_error("sharing randomness must have length d-1");
    }
    std::vector<Int> v;
    v.reserve(m.width());
    v.push_back(m.field().reduce(secret));
    for (const auto& r : randomness) v.push_back(m.field().reduce(r));
    return m.matrix().mul_vec(v);
}

Sharing share_with(const Msp& m, const Int& secret, std::vector<Int> randomness) {
    const auto values = row_values(m, secret, randomness);
    ShareVector sv;
    sv.by_participant.resize(m.participants());
    for (std::size_t r = 0; r < m.row_count(); ++r) {
        sv.by_participant[m.owner_of(r)].push_back(values[r]);
    }
    for (auto& r : randomness) r = m.field().reduce(r);
    return Sharing{std::move(sv), std::move(randomness)};
}

Int reconstruct(const Msp& m, SubsetMask a, const ShareVector& shares) {
    if (shares.by_participant.size() != static_cast<std::size_t>(m.participants())) {
        throw validation_error("share vector participant count mismatch");
    }
    const auto rows = m.rows_of_set(a);
    const auto alpha = m.matrix().select_rows(rows).solve_in_span(m.target());
    if (!alpha) throw unauthorized_error("unauthorized set");
    // Row r's value sits at position |{r' < r : same owner}| of the owner's
    // list (per-participant shares are in ascending row order).
    Int acc = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const int owner = m.owner_of(rows[i]);
        std::size_t pos = 0;
        for (std::size_t r = 0; r < rows[i]; ++r) {
            if (m.owner_of(r) == owner) ++pos;
        }
        const auto& list = shares.by_participant[owner];
        if (pos >= list.size()) throw validation_error("missing share for participant");
        acc += (*alpha)[i] * list[pos];
    }
    return m.field().reduce(acc);
}

AccessStructure realized_structure(const Msp& m) {
    if (m.participants() > 20) {
        throw validation_error("structure enumeration limited to 20 participants");
    }
    const int n = m.participants();
    const auto target = m.target();
    std::vector<bool> authorized(std::size_t(1) << n, false);
    for (SubsetMask a = 1; a < (SubsetMask(1) << n); ++a) {
        const auto rows = m.rows_of_set(a);
        authorized[a] = m.matrix().select_rows(rows).solve_in_span(target).has_value();
    }
    std::vector<SubsetMask> basis;
    for (SubsetMask a = 1; a < (SubsetMask(1) << n); ++a) {
        if (!authorized[a]) continue;
        bool minimal = true;
        for (int i = 0; i < n && minimal; ++i) {
            if ((a >> i & 1) && authorized[a & ~(SubsetMask(1) << i)]) minimal = false;
        }
        if (minimal) basis.push_back(a);
    }
    return AccessStructure(n, std::move(basis));
}

namespace {

// Shared tail of both contraction routines: given the certificate, rewrite
// every surviving row as h_i - (h_i)_K U^{-1} (h_w rows) and re-index.
Contraction apply_contraction(const Msp& m, SubsetMask q, InvertibleSubmatrix cert,
                              const std::vector<std::size_t>& q_rows,
                              std::optional<std::size_t> k_hint) {
    const Field& f = m.field();
    // Certificate rows were found inside H_Q; map back to H's indexing.
    for (auto& w : cert.row_idx) w = q_rows[w];
    const Matrix h_w = m.matrix().select_rows(cert.row_idx);

    std::vector<int> index_map = mask_members(~q & full_mask(m.participants()));
    const int nn = static_cast<int>(index_map.size());
    if (nn == 0) throw validation_error("contraction would remove every participant");

    Matrix h_new(f, nn, m.width());
    for (int i = 0; i < nn; ++i) {
        const std::size_t old_row = m.rows_of(index_map[i])[0];
        std::vector<Int> hk(cert.col_idx.size());
        for (std::size_t j = 0; j < cert.col_idx.size(); ++j) {
            hk[j] = m.matrix().at(old_row, cert.col_idx[j]);
        }
        // coeff = (h_i)_K · U^{-1}
        std::vector<Int> coeff(cert.col_idx.size(), Int(0));
        for (std::size_t c = 0; c < cert.col_idx.size(); ++c) {
            Int acc = 0;
            for (std::size_t j = 0; j < cert.col_idx.size(); ++j) {
                acc += hk[j] * cert.u_inverse.at(j, c);
            }
            coeff[c] = f.reduce(acc);
        }
        for (std::size_t c = 0; c < m.width(); ++c) {
            Int acc = m.matrix().at(old_row, c);
            for (std::size_t j = 0; j < cert.row_idx.size(); ++j) {
                acc -= coeff[j] * h_w.at(j, c);
            }
            h_new.set(i, c, acc);
        }
    }
    std::vector<int> owner(nn);
    for (int i = 0; i < nn; ++i) owner[i] = i;
    Msp out(f, std::move(h_new), std::move(owner), nn);
    return Contraction{std::move(out), std::move(index_map), std::move(cert.row_idx),
                       std::move(cert.col_idx), std::move(cert.u_inverse), k_hint};
}

void check_contractable(const Msp& m, SubsetMask q) {
    if (!m.ideal()) throw validation_error("contraction requires an ideal scheme");
    if (q == 0) throw validation_error("contraction set must be nonempty");
    if ((q & ~full_mask(m.participants())) != 0) {
        throw validation_error("subset references unknown participant");
    }
    const auto q_rows = m.rows_of_set(q);
    for (std::size_t r : q_rows) {
        bool zero = true;
        for (std::size_t c = 0; c < m.width() && zero; ++c) {
            if (m.matrix().at(r, c) != 0) zero = false;
        }
        if (zero) {
            throw validation_error("zero share row: scheme does not realize a connected structure");
        }
    }
    if (m.matrix().select_rows(q_rows).solve_in_span(m.target())) {
        throw unauthorized_error("cannot contract at authorized set");
    }
}

}  // namespace

Contraction contract_single(const Msp& m, int q) {
    if (q < 0 || q >= m.participants()) throw validation_error("participant index out of range");
    check_contractable(m, SubsetMask(1) << q);
    const std::size_t q_row = m.rows_of(q)[0];
    std::size_t k = 0;
    for (std::size_t c = 1; c < m.width(); ++c) {
        if (m.matrix().at(q_row, c) != 0) {
            k = c;
            break;
        }
    }
    if (k == 0) {
        // Row is supported on column 0 only; the unauthorized check above
        // already rejects it, so this is unreachable for valid schemes.
        throw validation_error("no usable pivot column for contraction");
    }
    Matrix u(m.field(), 1, 1);
    u.set(0, 0, m.field().inv(m.matrix().at(q_row, k)));
    InvertibleSubmatrix cert{{0}, {k}, std::move(u)};
    return apply_contraction(m, SubsetMask(1) << q, std::move(cert), {q_row}, k);
}

Contraction contract_multi(const Msp& m, SubsetMask q) {
    check_contractable(m, q);
    const auto q_rows = m.rows_of_set(q);
    auto cert = find_invertible_submatrix(m.matrix().select_rows(q_rows), 0);
    std::optional<std::size_t> k_hint;
    if (q_rows.size() == 1) k_hint = cert.col_idx[0];
    return apply_contraction(m, q, std::move(cert), q_rows, k_hint);
}

std::string Msp::to_text() const {
    std::ostringstream out;
    out << "msp v1\n";
    out << "modulus " << field_.modulus().str() << "\n";
    out << "participants " << participants_ << "\n";
    out << "rows " << h_.rows() << " cols " << h_.cols() << "\n";
    for (std::size_t r = 0; r < h_.rows(); ++r) {
        out << "row";
        for (std::size_t c = 0; c < h_.cols(); ++c) out << " " << h_.at(r, c).str();
        out << "\n";
    }
    out << "psi";
    for (int owner : row_owner_) out << " " << owner + 1;
    out << "\n";
    return out.str();
}

Msp Msp::from_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string tok;
    auto expect = [&](const char* want) {
        if (!(in >> tok) || tok != want) {
            throw validation_error(std::string("msp text: expected '") + want + "'");
        }
    };
    expect("msp");
    expect("v1");
    expect("modulus");
    std::string mod_str;
    if (!(in >> mod_str)) throw validation_error("msp text: missing modulus");
    Field f{Int(mod_str)};
    expect("participants");
    int n = 0;
    if (!(in >> n)) throw validation_error("msp text: missing participant count");
    expect("rows");
    std::size_t rows = 0, cols = 0;
    if (!(in >> rows)) throw validation_error("msp text: missing row count");
    expect("cols");
    if (!(in >> cols)) throw validation_error("msp text: missing column count");
    Matrix h(f, rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        expect("row");
        for (std::size_t c = 0; c < cols; ++c) {
            std::string v;
            if (!(in >> v)) throw validation_error("msp text: truncated row");
            h.set(r, c, Int(v));
        }
    }
    expect("psi");
    std::vector<int> owner(rows);
    for (auto& o : owner) {
        int one_based = 0;
        if (!(in >> one_based)) throw validation_error("msp text: truncated psi map");
        o = one_based - 1;
    }
    return Msp(std::move(f), std::move(h), std::move(owner), n);
}

std::string shares_to_text(const SharesDocument& doc) {
    std::ostringstream out;
    out << "shares v1\n";
    out << "modulus " << doc.modulus.str() << "\n";
    out << "participants " << doc.shares.by_participant.size() << "\n";
    for (std::size_t i = 0; i < doc.shares.by_participant.size(); ++i) {
        out << "share " << i + 1 << " :";
        for (const auto& v : doc.shares.by_participant[i]) out << " " << v.str();
        out << "\n";
    }
    out << "vtail";
    for (const auto& r : doc.randomness) out << " " << r.str();
    out << "\n";
    return out.str();
}

SharesDocument shares_from_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    auto bad = [](const std::string& why) { return validation_error("shares text: " + why); };
    if (!std::getline(in, line) || line != "shares v1") throw bad("missing header");
    SharesDocument doc;
    std::string word;
    if (!(in >> word) || word != "modulus" || !(in >> word)) throw bad("missing modulus");
    doc.modulus = Int(word);
    std::size_t n = 0;
    if (!(in >> word) || word != "participants" || !(in >> n)) throw bad("missing participants");
    std::getline(in, line);
    doc.shares.by_participant.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw bad("truncated share list");
        std::istringstream ls(line);
        std::size_t idx = 0;
        std::string colon;
        if (!(ls >> word >> idx >> colon) || word != "share" || colon != ":" || idx != i + 1) {
            throw bad("malformed share line");
        }
        while (ls >> word) doc.shares.by_participant[i].emplace_back(word);
    }
    if (!std::getline(in, line)) throw bad("missing vtail");
    std::istringstream ls(line);
    if (!(ls >> word) || word != "vtail") throw bad("missing vtail");
    while (ls >> word) doc.randomness.emplace_back(word);
    return doc;
}

}  // namespace lsss
