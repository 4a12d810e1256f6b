#include "lsss/abe.hpp"

#include <json.hpp>

#include <algorithm>

#include "lsss/errors.hpp"

namespace lsss::abe {

namespace {

void check_backend(const PairingBackend& bk, const PublicKey& pk) {
    if (pk.backend != bk.name() || pk.order != bk.order()) {
        throw validation_error("key material belongs to a different pairing backend");
    }
}

void check_policy(const PublicKey& pk, const Policy& policy) {
    if (!(policy.msp.field().modulus() == pk.order)) {
        throw validation_error("policy scheme must live over the group order");
    }
    if (policy.attr_of.size() != static_cast<std::size_t>(policy.msp.participants())) {
        throw validation_error("policy attribute map size mismatch");
    }
    std::vector<int> seen;
    for (int attr : policy.attr_of) {
        if (attr < 0 || attr >= pk.universe_size()) {
            throw validation_error("policy references an attribute outside the universe");
        }
        seen.push_back(attr);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
        throw validation_error("policy lists an attribute twice");
    }
}

// Participant mask for universe attributes; throws when one is not in the
// policy.
SubsetMask participants_of_attrs(const Policy& policy, const std::vector<int>& attrs) {
    SubsetMask mask = 0;
    for (int attr : attrs) {
        const auto it = std::find(policy.attr_of.begin(), policy.attr_of.end(), attr);
        if (it == policy.attr_of.end()) {
            throw validation_error("attribute " + std::to_string(attr + 1) + " is not in the policy");
        }
        mask |= SubsetMask(1) << (it - policy.attr_of.begin());
    }
    return mask;
}

void check_unauthorized(const Policy& policy, SubsetMask q) {
    const auto rows = policy.msp.rows_of_set(q);
    for (std::size_t r : rows) {
        bool zero = true;
        for (std::size_t c = 0; c < policy.msp.width() && zero; ++c) {
            if (policy.msp.matrix().at(r, c) != 0) zero = false;
        }
        if (zero) throw validation_error("policy has a zero share row");
    }
    if (policy.msp.matrix().select_rows(rows).solve_in_span(policy.msp.target())) {
        throw unauthorized_error("cannot contract at authorized set");
    }
}

}  // namespace

std::vector<std::size_t> Policy::rows_of_attributes(const std::vector<int>& attrs) const {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < msp.row_count(); ++r) {
        if (std::find(attrs.begin(), attrs.end(), attribute_of_row(r)) != attrs.end()) {
            rows.push_back(r);
        }
    }
    return rows;
}

Policy Policy::threshold_policy(int t, int n, const Int& p) {
    Policy policy{Msp::shamir(t, n, p), {}, t};
    for (int i = 0; i < n; ++i) policy.attr_of.push_back(i);
    return policy;
}

std::pair<PublicKey, MasterKey> setup(const PairingBackend& bk, int universe_size,
                                      SeededRng& rng) {
    if (universe_size < 1) throw validation_error("attribute universe must be nonempty");
    const Int beta = bk.random_scalar(rng);
    const Int a = bk.random_scalar(rng);
    PublicKey pk;
    pk.backend = bk.name();
    pk.order = bk.order();
    pk.g = bk.generator();
    pk.g_a = bk.g_pow(a);
    pk.e_gg_beta = bk.gt_pow(bk.pair(pk.g, pk.g), beta);
    for (int x = 0; x < universe_size; ++x) {
        pk.t_attr.push_back(bk.g_pow(bk.random_scalar(rng)));
    }
    return {std::move(pk), MasterKey{bk.g_pow(beta)}};
}

PrivateKey keygen(const PairingBackend& bk, const PublicKey& pk, const MasterKey& msk,
                  std::vector<int> attrs, SeededRng& rng) {
    check_backend(bk, pk);
    std::sort(attrs.begin(), attrs.end());
    attrs.erase(std::unique(attrs.begin(), attrs.end()), attrs.end());
    for (int attr : attrs) {
        if (attr < 0 || attr >= pk.universe_size()) {
            throw validation_error("attribute outside the universe");
        }
    }
    const Int tau = bk.random_scalar(rng);
    PrivateKey sk;
    sk.attrs = std::move(attrs);
    sk.k = bk.mul(msk.g_beta, bk.pow(pk.g_a, tau));
    sk.l = bk.g_pow(tau);
    for (int attr : sk.attrs) sk.k_attr.emplace(attr, bk.pow(pk.t_attr[attr], tau));
    return sk;
}

std::vector<Int> derive_ck_scalars(const std::vector<std::uint8_t>& seed, std::size_t rows,
                                   const Int& p) {
    std::string key(seed.begin(), seed.end());
    std::vector<Int> r;
    for (std::size_t i = 0; i < rows; ++i) {
        r.push_back(hash_to_scalar("lsss-contraction-key", key + "/" + std::to_string(i), p));
    }
    return r;
}

Ciphertext encrypt_with(const PairingBackend& bk, const PublicKey& pk, const GT& message,
                        const Policy& policy, const std::vector<Int>& v,
                        const std::vector<Int>& r) {
    check_backend(bk, pk);
    check_policy(pk, policy);
    if (v.size() != policy.msp.width()) throw validation_error("sharing vector length mismatch");
    if (r.size() != policy.msp.row_count()) throw validation_error("row scalar count mismatch");
    const Field& f = policy.msp.field();

    std::vector<Int> vv;
    for (const auto& x : v) vv.push_back(f.reduce(x));
    const auto shares = policy.msp.matrix().mul_vec(vv);

    Ciphertext ct{policy, bk.gt_mul(message, bk.gt_pow(pk.e_gg_beta, vv[0])),
                  bk.g_pow(vv[0]), {}, {}, {}};
    for (std::size_t i = 0; i < shares.size(); ++i) {
        const G1 t_i = pk.t_attr[policy.attribute_of_row(i)];
        ct.c_rows.push_back(bk.mul(bk.pow(pk.g_a, shares[i]), bk.pow(t_i, f.neg(f.reduce(r[i])))));
        ct.d_rows.push_back(bk.g_pow(r[i]));
    }
    return ct;
}

EncryptResult encrypt_star(const PairingBackend& bk, const PublicKey& pk, const GT& message,
                           const Policy& policy, SeededRng& rng, CkMode mode) {
    check_backend(bk, pk);
    check_policy(pk, policy);
    std::vector<Int> v;
    for (std::size_t i = 0; i < policy.msp.width(); ++i) v.push_back(bk.random_scalar(rng));

    ContractionKey ck;
    if (mode == CkMode::prf) {
        ck.prf_seed = rng.bytes(32);
        ck.r = derive_ck_scalars(ck.prf_seed, policy.msp.row_count(), pk.order);
    } else {
        for (std::size_t i = 0; i < policy.msp.row_count(); ++i) {
            ck.r.push_back(bk.random_scalar(rng));
        }
    }
    Ciphertext ct = encrypt_with(bk, pk, message, policy, v, ck.r);
    return EncryptResult{std::move(ct), std::move(ck), std::move(v)};
}

GT decrypt(const PairingBackend& bk, const PublicKey& pk, const PrivateKey& sk,
           const Ciphertext& ct) {
    check_backend(bk, pk);
    const Policy& policy = ct.policy;
    const Field& f = policy.msp.field();

    // rows usable with the key's attributes, plus rows with disclosed r
    std::vector<std::size_t> rows = policy.rows_of_attributes(sk.attrs);
    for (const auto& [row, r] : ct.disclosed_r) {
        if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end());

    const auto alpha = policy.msp.matrix().select_rows(rows).solve_in_span(policy.msp.target());
    if (!alpha) throw unauthorized_error("unauthorized attribute set");

    GT denom = bk.gt_identity();
    for (std::size_t idx = 0; idx < rows.size(); ++idx) {
        const std::size_t row = rows[idx];
        const int attr = policy.attribute_of_row(row);
        GT term;
        if (sk.k_attr.count(attr)) {
            term = bk.gt_mul(bk.pair(ct.c_rows[row], sk.l),
                             bk.pair(ct.d_rows[row], sk.k_attr.at(attr)));
        } else {
            const auto it = std::find_if(ct.disclosed_r.begin(), ct.disclosed_r.end(),
                                         [&](const auto& e) { return e.first == row; });
            // unblind the row term with the disclosed scalar:
            // e(C_row T^r, L) = e(g,g)^{a s_row tau}
            const G1 unblinded = bk.mul(ct.c_rows[row], bk.pow(pk.t_attr[attr], it->second));
            term = bk.pair(unblinded, sk.l);
        }
        denom = bk.gt_mul(denom, bk.gt_pow(term, f.reduce((*alpha)[idx])));
    }
    const GT blind = bk.gt_mul(bk.pair(ct.c_prime, sk.k), bk.gt_inverse(denom));
    return bk.gt_mul(ct.c, bk.gt_inverse(blind));
}

CkRestriction restrict_ck(const ContractionKey& ck, const Policy& policy,
                          const std::vector<int>& q_attrs) {
    if (ck.r.size() != policy.msp.row_count()) {
        throw validation_error("contraction key does not match the policy row count");
    }
    CkRestriction out;
    for (std::size_t row : policy.rows_of_attributes(q_attrs)) out[row] = ck.r[row];
    if (out.empty()) throw validation_error("no policy rows carry the requested attributes");
    return out;
}

Ciphertext contract_sct(const PairingBackend& bk, const PublicKey& pk, const Ciphertext& ct,
                        const std::vector<int>& q_attrs, const CkRestriction& ck_q) {
    check_backend(bk, pk);
    if (!ct.policy.msp.ideal()) {
        throw validation_error("shrinking contraction requires an ideal policy");
    }
    const Field& f = ct.policy.msp.field();
    const SubsetMask q = participants_of_attrs(ct.policy, q_attrs);
    if (q == 0) throw validation_error("contraction set must be nonempty");
    check_unauthorized(ct.policy, q);
    for (std::size_t row : ct.policy.msp.rows_of_set(q)) {
        if (!ck_q.count(row)) {
            throw validation_error("restricted contraction key is missing a removed row");
        }
    }

    const auto contraction = contract_multi(ct.policy.msp, q);

    // unblinded removed-row terms g^{a s_w}
    std::vector<G1> b_w;
    for (std::size_t w : contraction.w_rows) {
        const G1 t_w = pk.t_attr[ct.policy.attribute_of_row(w)];
        b_w.push_back(bk.mul(ct.c_rows[w], bk.pow(t_w, ck_q.at(w))));
    }

    Policy new_policy{contraction.msp, {}, std::nullopt};
    for (int i = 0; i < contraction.msp.participants(); ++i) {
        new_policy.attr_of.push_back(ct.policy.attr_of[contraction.index_map[i]]);
    }
    if (ct.policy.threshold) new_policy.threshold = *ct.policy.threshold - popcount(q);
    Ciphertext out{std::move(new_policy), ct.c, ct.c_prime, {}, {}, {}};

    std::vector<std::size_t> new_row_of(ct.policy.msp.row_count(), SIZE_MAX);
    for (int i = 0; i < contraction.msp.participants(); ++i) {
        const std::size_t old_row = ct.policy.msp.rows_of(contraction.index_map[i])[0];
        new_row_of[old_row] = static_cast<std::size_t>(i);
        // coefficient row (h_old)_K U^{-1}
        G1 c_new = ct.c_rows[old_row];
        for (std::size_t j = 0; j < contraction.w_rows.size(); ++j) {
            Int coeff = 0;
            for (std::size_t b = 0; b < contraction.k_cols.size(); ++b) {
                coeff += ct.policy.msp.matrix().at(old_row, contraction.k_cols[b]) *
                         contraction.u_inverse.at(b, j);
            }
            c_new = bk.mul(c_new, bk.pow(b_w[j], f.neg(f.reduce(coeff))));
        }
        out.c_rows.push_back(c_new);
        out.d_rows.push_back(ct.d_rows[old_row]);
    }
    for (const auto& [row, r] : ct.disclosed_r) {
        if (new_row_of[row] != SIZE_MAX) out.disclosed_r.emplace_back(new_row_of[row], r);
    }
    std::sort(out.disclosed_r.begin(), out.disclosed_r.end());
    return out;
}

Ciphertext contract_ect(const Ciphertext& ct, const std::vector<int>& q_attrs,
                        const CkRestriction& ck_q) {
    const SubsetMask q = participants_of_attrs(ct.policy, q_attrs);
    if (q == 0) throw validation_error("contraction set must be nonempty");
    check_unauthorized(ct.policy, q);
    Ciphertext out = ct;
    for (std::size_t row : ct.policy.msp.rows_of_set(q)) {
        if (!ck_q.count(row)) {
            throw validation_error("restricted contraction key is missing a removed row");
        }
        const bool already = std::any_of(out.disclosed_r.begin(), out.disclosed_r.end(),
                                         [&](const auto& e) { return e.first == row; });
        if (already) throw validation_error("row scalar already disclosed");
        out.disclosed_r.emplace_back(row, ck_q.at(row));
    }
    std::sort(out.disclosed_r.begin(), out.disclosed_r.end());
    return out;
}

EncryptResult contract_re(const PairingBackend& bk, const PublicKey& pk, const PrivateKey& sk,
                          const Ciphertext& ct, const std::vector<int>& q_attrs, SeededRng& rng,
                          CkMode mode) {
    const GT message = decrypt(bk, pk, sk, ct);
    const SubsetMask q = participants_of_attrs(ct.policy, q_attrs);
    if (q == 0) throw validation_error("contraction set must be nonempty");
    check_unauthorized(ct.policy, q);

    Policy fresh{ct.policy.msp, {}, std::nullopt};
    if (ct.policy.threshold && ct.policy.msp.ideal()) {
        const int t_new = *ct.policy.threshold - popcount(q);
        const int n_new = ct.policy.msp.participants() - popcount(q);
        fresh = Policy{Msp::shamir(t_new, n_new, pk.order), {}, t_new};
        for (int i = 0; i < ct.policy.msp.participants(); ++i) {
            if (!(q >> i & 1)) fresh.attr_of.push_back(ct.policy.attr_of[i]);
        }
    } else {
        const auto contraction = contract_multi(ct.policy.msp, q);
        fresh = Policy{contraction.msp, {}, std::nullopt};
        for (int i = 0; i < contraction.msp.participants(); ++i) {
            fresh.attr_of.push_back(ct.policy.attr_of[contraction.index_map[i]]);
        }
    }
    return encrypt_star(bk, pk, message, fresh, rng, mode);
}

CiphertextSize ciphertext_size(const Ciphertext& ct) {
    CiphertextSize sz;
    sz.source_elements = 1 + ct.c_rows.size() + ct.d_rows.size();
    sz.target_elements = 1;
    sz.matrix_scalars = ct.policy.msp.row_count() * ct.policy.msp.width();
    sz.map_entries = ct.policy.msp.row_count();
    sz.ck_scalars = ct.disclosed_r.size();
    return sz;
}

// ---------------------------------------------------------------------------
// JSON forms. Group elements and scalars are decimal strings.

namespace {

nlohmann::json g1_json(const G1& e) { return e.v.str(); }
nlohmann::json gt_json(const GT& e) { return e.v.str(); }
G1 g1_from(const nlohmann::json& j) { return G1{Int(j.get<std::string>())}; }
GT gt_from(const nlohmann::json& j) { return GT{Int(j.get<std::string>())}; }

nlohmann::json policy_json(const Policy& p) {
    nlohmann::json j;
    j["msp"] = p.msp.to_text();
    j["attr_of"] = nlohmann::json::array();
    for (int a : p.attr_of) j["attr_of"].push_back(a + 1);
    if (p.threshold) j["threshold"] = *p.threshold;
    return j;
}

Policy policy_from(const nlohmann::json& j) {
    Policy p{Msp::from_text(j.at("msp").get<std::string>()), {}, std::nullopt};
    for (int a : j.at("attr_of").get<std::vector<int>>()) p.attr_of.push_back(a - 1);
    if (j.contains("threshold")) p.threshold = j.at("threshold").get<int>();
    if (p.attr_of.size() != static_cast<std::size_t>(p.msp.participants())) {
        throw validation_error("policy attribute map size mismatch");
    }
    return p;
}

nlohmann::json header(std::string_view kind, const Int& order) {
    nlohmann::json j;
    j["kind"] = std::string(kind);
    j["backend"] = "debug";
    j["order"] = order.str();
    return j;
}

nlohmann::json parse_checked(std::string_view text, std::string_view kind) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        if (j.at("kind").get<std::string>() != kind) {
            throw validation_error("expected a " + std::string(kind) + " document");
        }
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("abe json: ") + e.what());
    }
    return j;
}

}  // namespace

std::string to_json(const PublicKey& pk) {
    nlohmann::json j = header("pk", pk.order);
    j["backend"] = pk.backend;
    j["g"] = g1_json(pk.g);
    j["g_a"] = g1_json(pk.g_a);
    j["e_gg_beta"] = gt_json(pk.e_gg_beta);
    j["t_attr"] = nlohmann::json::array();
    for (const auto& t : pk.t_attr) j["t_attr"].push_back(g1_json(t));
    return j.dump(2);
}

PublicKey pk_from_json(std::string_view text) {
    const auto j = parse_checked(text, "pk");
    try {
        PublicKey pk;
        pk.backend = j.at("backend").get<std::string>();
        pk.order = Int(j.at("order").get<std::string>());
        pk.g = g1_from(j.at("g"));
        pk.g_a = g1_from(j.at("g_a"));
        pk.e_gg_beta = gt_from(j.at("e_gg_beta"));
        for (const auto& t : j.at("t_attr")) pk.t_attr.push_back(g1_from(t));
        return pk;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("abe json: ") + e.what());
    }
}

std::string to_json(const MasterKey& msk, const Int& order) {
    nlohmann::json j = header("msk", order);
    j["g_beta"] = g1_json(msk.g_beta);
    return j.dump(2);
}

MasterKey msk_from_json(std::string_view text) {
    const auto j = parse_checked(text, "msk");
    return MasterKey{g1_from(j.at("g_beta"))};
}

std::string to_json(const PrivateKey& sk, const Int& order) {
    nlohmann::json j = header("sk", order);
    j["attrs"] = nlohmann::json::array();
    for (int a : sk.attrs) j["attrs"].push_back(a + 1);
    j["k"] = g1_json(sk.k);
    j["l"] = g1_json(sk.l);
    j["k_attr"] = nlohmann::json::object();
    for (const auto& [attr, e] : sk.k_attr) j["k_attr"][std::to_string(attr + 1)] = g1_json(e);
    return j.dump(2);
}

PrivateKey sk_from_json(std::string_view text) {
    const auto j = parse_checked(text, "sk");
    try {
        PrivateKey sk;
        for (int a : j.at("attrs").get<std::vector<int>>()) sk.attrs.push_back(a - 1);
        sk.k = g1_from(j.at("k"));
        sk.l = g1_from(j.at("l"));
        for (const auto& [key, val] : j.at("k_attr").items()) {
            sk.k_attr.emplace(std::stoi(key) - 1, g1_from(val));
        }
        return sk;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("abe json: ") + e.what());
    }
}

std::string to_json(const Ciphertext& ct, const Int& order) {
    nlohmann::json j = header("ct", order);
    j["policy"] = policy_json(ct.policy);
    j["c"] = gt_json(ct.c);
    j["c_prime"] = g1_json(ct.c_prime);
    j["c_rows"] = nlohmann::json::array();
    for (const auto& e : ct.c_rows) j["c_rows"].push_back(g1_json(e));
    j["d_rows"] = nlohmann::json::array();
    for (const auto& e : ct.d_rows) j["d_rows"].push_back(g1_json(e));
    j["disclosed_r"] = nlohmann::json::array();
    for (const auto& [row, r] : ct.disclosed_r) {
        j["disclosed_r"].push_back({{"row", row + 1}, {"r", r.str()}});
    }
    return j.dump(2);
}

Ciphertext ct_from_json(std::string_view text) {
    const auto j = parse_checked(text, "ct");
    try {
        Ciphertext ct{policy_from(j.at("policy")), gt_from(j.at("c")), g1_from(j.at("c_prime")),
                      {}, {}, {}};
        for (const auto& e : j.at("c_rows")) ct.c_rows.push_back(g1_from(e));
        for (const auto& e : j.at("d_rows")) ct.d_rows.push_back(g1_from(e));
        for (const auto& e : j.at("disclosed_r")) {
            ct.disclosed_r.emplace_back(e.at("row").get<std::size_t>() - 1,
                                        Int(e.at("r").get<std::string>()));
        }
        if (ct.c_rows.size() != ct.policy.msp.row_count() ||
            ct.d_rows.size() != ct.policy.msp.row_count()) {
            throw validation_error("ciphertext component count mismatch");
        }
        return ct;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("abe json: ") + e.what());
    }
}

std::string to_json(const ContractionKey& ck, const Int& order) {
    nlohmann::json j = header("ck", order);
    std::string seed_hex;
    for (std::uint8_t b : ck.prf_seed) {
        static const char* d = "0123456789abcdef";
        seed_hex.push_back(d[b >> 4]);
        seed_hex.push_back(d[b & 15]);
    }
    j["prf_seed"] = seed_hex;
    j["r"] = nlohmann::json::array();
    for (const auto& r : ck.r) j["r"].push_back(r.str());
    return j.dump(2);
}

ContractionKey ck_from_json(std::string_view text) {
    const auto j = parse_checked(text, "ck");
    try {
        ContractionKey ck;
        const std::string hex = j.at("prf_seed").get<std::string>();
        if (hex.size() % 2) throw validation_error("bad prf seed encoding");
        auto nibble = [](char c) -> int {
            if (c >= '0' && c <= '9') return c - '0';
            if (c >= 'a' && c <= 'f') return c - 'a' + 10;
            throw validation_error("bad prf seed encoding");
        };
        for (std::size_t i = 0; i < hex.size(); i += 2) {
            ck.prf_seed.push_back(static_cast<std::uint8_t>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
        }
        for (const auto& r : j.at("r")) ck.r.emplace_back(r.get<std::string>());
        return ck;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("abe json: ") + e.what());
    }
}

std::string to_json(const CkRestriction& ckq, const Int& order) {
    nlohmann::json j = header("ck_q", order);
    j["rows"] = nlohmann::json::array();
    for (const auto& [row, r] : ckq) j["rows"].push_back({{"row", row + 1}, {"r", r.str()}});
    return j.dump(2);
}

CkRestriction ckq_from_json(std::string_view text) {
    const auto j = parse_checked(text, "ck_q");
    try {
        CkRestriction out;
        for (const auto& e : j.at("rows")) {
            out[e.at("row").get<std::size_t>() - 1] = Int(e.at("r").get<std::string>());
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("abe json: ") + e.what());
    }
}

}  // namespace lsss::abe
