#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lsss/abe.hpp"
#include "lsss/errors.hpp"
#include "lsss/relocate.hpp"
#include "support.hpp"

using namespace lsss;
using namespace lsss::abe;

namespace {

const Int kBigPrime = (Int(1) << 159) + Int("162259276829213363391578010288129");

std::vector<int> first_attrs(int count, int offset = 0) {
    std::vector<int> v;
    for (int i = 0; i < count; ++i) v.push_back(offset + i);
    return v;
}

}  // namespace

TEST_CASE("debug pairing satisfies the group laws") {
    DebugPairing bk(Int(65521));
    SeededRng rng(1);
    for (int iter = 0; iter < 50; ++iter) {
        const Int a = rng.below(Int(65521)), b = rng.below(Int(65521));
        const G1 u = bk.g_pow(rng.below(Int(65521)));
        const G1 v = bk.g_pow(rng.below(Int(65521)));
        // e(u^a, v^b) = e(u,v)^{ab}
        CHECK(bk.pair(bk.pow(u, a), bk.pow(v, b)) == bk.gt_pow(bk.pair(u, v), a * b));
        CHECK(bk.mul(u, bk.inverse(u)) == bk.g_pow(Int(0)));
        CHECK(bk.gt_mul(bk.pair(u, v), bk.gt_inverse(bk.pair(u, v))) == bk.gt_identity());
    }
    // non-degeneracy
    CHECK(!(bk.pair(bk.generator(), bk.generator()) == bk.gt_identity()));
    // hash-to-group is deterministic and in range
    CHECK(bk.hash_to_group("x") == bk.hash_to_group("x"));
    CHECK(!(bk.hash_to_group("x") == bk.hash_to_group("y")));
}

TEST_CASE("hash_to_scalar is uniform-ish and deterministic") {
    const Int p(97);
    CHECK(hash_to_scalar("d", "data", p) == hash_to_scalar("d", "data", p));
    CHECK(hash_to_scalar("d", "data", p) != hash_to_scalar("d2", "data", p));
    std::vector<int> seen(97, 0);
    for (int i = 0; i < 2000; ++i) {
        ++seen[static_cast<int>(hash_to_scalar("d", std::to_string(i), p))];
    }
    CHECK(*std::min_element(seen.begin(), seen.end()) > 0);
}

TEST_CASE("setup consistency") {
    DebugPairing bk(Int(65521));
    SeededRng rng(7);
    const auto [pk, msk] = setup(bk, 10, rng);
    CHECK(pk.t_attr.size() == 10);
    // e(g, MSK) = e(g,g)^beta
    CHECK(bk.pair(pk.g, msk.g_beta) == pk.e_gg_beta);
    SeededRng rng2(7);
    const auto [pk2, msk2] = setup(bk, 10, rng2);
    CHECK(pk2.g_a == pk.g_a);
    CHECK(msk2.g_beta == msk.g_beta);
    CHECK(pk2.t_attr == pk.t_attr);
}

TEST_CASE("keygen consistency identity") {
    DebugPairing bk(kBigPrime);
    SeededRng rng(11);
    const auto [pk, msk] = setup(bk, 6, rng);
    SUBCASE("e(K, g) = e(g,g)^beta e(g^a, L)") {
        const auto sk = keygen(bk, pk, msk, {0, 2, 4}, rng);
        CHECK(bk.pair(sk.k, pk.g) == bk.gt_mul(pk.e_gg_beta, bk.pair(pk.g_a, sk.l)));
    }
    SUBCASE("empty and full attribute sets") {
        const auto none = keygen(bk, pk, msk, {}, rng);
        CHECK(none.k_attr.empty());
        const auto all = keygen(bk, pk, msk, first_attrs(6), rng);
        CHECK(all.k_attr.size() == 6);
    }
    SUBCASE("attribute outside the universe") {
        CHECK_THROWS_AS(keygen(bk, pk, msk, {6}, rng), validation_error);
    }
}

TEST_CASE("encrypt/decrypt roundtrip on a threshold policy") {
    DebugPairing bk(kBigPrime);
    SeededRng rng(13);
    const auto [pk, msk] = setup(bk, 10, rng);
    const auto policy = Policy::threshold_policy(8, 10, kBigPrime);
    const GT message = GT{Int("123456789123456789")};
    const auto enc = encrypt_star(bk, pk, message, policy, rng);

    SUBCASE("8 attributes decrypt") {
        const auto sk = keygen(bk, pk, msk, first_attrs(8), rng);
        CHECK(decrypt(bk, pk, sk, enc.ct) == message);
    }
    SUBCASE("7 attributes are refused before pairing work") {
        const auto sk = keygen(bk, pk, msk, first_attrs(7), rng);
        CHECK_THROWS_AS(decrypt(bk, pk, sk, enc.ct), unauthorized_error);
    }
    SUBCASE("identity message") {
        const auto enc_id = encrypt_star(bk, pk, bk.gt_identity(), policy, rng);
        const auto sk = keygen(bk, pk, msk, first_attrs(9), rng);
        CHECK(decrypt(bk, pk, sk, enc_id.ct) == bk.gt_identity());
    }
    SUBCASE("blinding removal with the known exponent") {
        // C e(g,g)^{-beta s} = M, with s the first sharing coordinate
        const GT blind = bk.gt_pow(pk.e_gg_beta, enc.sharing_vector[0]);
        CHECK(bk.gt_mul(enc.ct.c, bk.gt_inverse(blind)) == message);
    }
}

TEST_CASE("contraction key modes agree") {
    DebugPairing bk(Int(65521));
    SeededRng rng(17);
    const auto [pk, msk] = setup(bk, 5, rng);
    const auto policy = Policy::threshold_policy(3, 5, Int(65521));
    const GT message = GT{Int(777)};

    const auto prf = encrypt_star(bk, pk, message, policy, rng, CkMode::prf);
    CHECK(prf.ck.prf_mode());
    CHECK(prf.ck.r == derive_ck_scalars(prf.ck.prf_seed, 5, pk.order));

    // explicit key with the same scalars and sharing vector gives the
    // identical ciphertext
    const auto ct2 = encrypt_with(bk, pk, message, policy, prf.sharing_vector, prf.ck.r);
    CHECK(ct2.c == prf.ct.c);
    CHECK(ct2.c_rows == prf.ct.c_rows);
    CHECK(ct2.d_rows == prf.ct.d_rows);
}

TEST_CASE("contract_sct roundtrips over the 160-bit prime") {
    DebugPairing bk(kBigPrime);
    SeededRng rng(19);
    const auto [pk, msk] = setup(bk, 10, rng);
    const auto policy = Policy::threshold_policy(8, 10, kBigPrime);
    const GT message = GT{Int("98765432109876543210")};
    const auto enc = encrypt_star(bk, pk, message, policy, rng);

    for (int m = 1; m <= 7; ++m) {
        CAPTURE(m);
        const auto q = first_attrs(m, 10 - m);  // last m attributes
        const auto ck_q = restrict_ck(enc.ck, policy, q);
        const auto contracted = contract_sct(bk, pk, enc.ct, q, ck_q);
        CHECK(contracted.c_rows.size() == static_cast<std::size_t>(10 - m));
        CHECK(contracted.policy.threshold == 8 - m);

        const auto sk_good = keygen(bk, pk, msk, first_attrs(8 - m), rng);
        CHECK(decrypt(bk, pk, sk_good, contracted) == message);
        const auto sk_bad = keygen(bk, pk, msk, first_attrs(7 - m), rng);
        CHECK_THROWS_AS(decrypt(bk, pk, sk_bad, contracted), unauthorized_error);
    }
}

TEST_CASE("contract_sct component counting") {
    DebugPairing bk(Int(65521));
    SeededRng rng(23);
    const auto [pk, msk] = setup(bk, 10, rng);
    const auto policy = Policy::threshold_policy(8, 10, Int(65521));
    const auto enc = encrypt_star(bk, pk, GT{Int(5)}, policy, rng);

    const auto fresh = ciphertext_size(enc.ct);
    CHECK(fresh.target_elements == 1);
    CHECK(fresh.source_elements == 21);  // C' + 10 C_i + 10 D_i
    CHECK(fresh.matrix_scalars == 80);
    CHECK(fresh.map_entries == 10);
    CHECK(fresh.ck_scalars == 0);

    const auto ck_q = restrict_ck(enc.ck, policy, {9});
    const auto sct = ciphertext_size(contract_sct(bk, pk, enc.ct, {9}, ck_q));
    CHECK(sct.source_elements == fresh.source_elements - 2);
    CHECK(sct.matrix_scalars == fresh.matrix_scalars - 8);  // one row fewer, d stays 8
    const auto ect = ciphertext_size(contract_ect(enc.ct, {9}, ck_q));
    CHECK(ect.total_scalar_units() == fresh.total_scalar_units() + 1);
}

TEST_CASE("contract_sct errors") {
    DebugPairing bk(Int(65521));
    SeededRng rng(29);
    const auto [pk, msk] = setup(bk, 4, rng);
    const auto policy = Policy::threshold_policy(2, 4, Int(65521));
    const auto enc = encrypt_star(bk, pk, GT{Int(1)}, policy, rng);
    SUBCASE("authorized set") {
        const auto ck_q = restrict_ck(enc.ck, policy, {0, 1});
        CHECK_THROWS_AS(contract_sct(bk, pk, enc.ct, {0, 1}, ck_q), unauthorized_error);
    }
    SUBCASE("missing scalar") {
        CHECK_THROWS_AS(contract_sct(bk, pk, enc.ct, {0}, CkRestriction{}), validation_error);
    }
    SUBCASE("attribute outside the policy") {
        const auto ck_q = restrict_ck(enc.ck, policy, {0});
        CHECK_THROWS_AS(contract_sct(bk, pk, enc.ct, {7}, ck_q), validation_error);
    }
}

TEST_CASE("contract_ect roundtrips and chains") {
    DebugPairing bk(kBigPrime);
    SeededRng rng(31);
    const auto [pk, msk] = setup(bk, 10, rng);
    const auto policy = Policy::threshold_policy(8, 10, kBigPrime);
    const GT message = GT{Int(424242)};
    const auto enc = encrypt_star(bk, pk, message, policy, rng);

    SUBCASE("single extension") {
        for (int m = 1; m <= 7; ++m) {
            const auto q = first_attrs(m, 10 - m);
            const auto ext = contract_ect(enc.ct, q, restrict_ck(enc.ck, policy, q));
            CHECK(ext.disclosed_r.size() == static_cast<std::size_t>(m));
            const auto sk_good = keygen(bk, pk, msk, first_attrs(8 - m), rng);
            CHECK(decrypt(bk, pk, sk_good, ext) == message);
            const auto sk_bad = keygen(bk, pk, msk, first_attrs(7 - m), rng);
            CHECK_THROWS_AS(decrypt(bk, pk, sk_bad, ext), unauthorized_error);
        }
    }
    SUBCASE("two disjoint extensions compose") {
        const auto once = contract_ect(enc.ct, {9}, restrict_ck(enc.ck, policy, {9}));
        const auto twice = contract_ect(once, {8}, restrict_ck(enc.ck, policy, {8}));
        const auto sk = keygen(bk, pk, msk, first_attrs(6), rng);
        CHECK(decrypt(bk, pk, sk, twice) == message);
        CHECK_THROWS_AS(contract_ect(twice, {8}, restrict_ck(enc.ck, policy, {8})),
                        validation_error);  // already disclosed
    }
}

TEST_CASE("contract_re re-encrypts freshly") {
    DebugPairing bk(kBigPrime);
    SeededRng rng(37);
    const auto [pk, msk] = setup(bk, 10, rng);
    const auto policy = Policy::threshold_policy(8, 10, kBigPrime);
    const GT message = GT{Int(31415926)};
    const auto enc = encrypt_star(bk, pk, message, policy, rng);
    const auto sk_owner = keygen(bk, pk, msk, first_attrs(8), rng);

    for (int m = 1; m <= 7; ++m) {
        const auto q = first_attrs(m, 10 - m);
        const auto re = contract_re(bk, pk, sk_owner, enc.ct, q, rng);
        // same shape as the shrinking contraction, fresh content
        const auto ck_q = restrict_ck(enc.ck, policy, q);
        const auto sct = contract_sct(bk, pk, enc.ct, q, ck_q);
        CHECK(ciphertext_size(re.ct).group_elements() == ciphertext_size(sct).group_elements());
        CHECK(!(re.ct.c == sct.c));

        const auto sk_good = keygen(bk, pk, msk, first_attrs(8 - m), rng);
        CHECK(decrypt(bk, pk, sk_good, re.ct) == message);
        const auto sk_bad = keygen(bk, pk, msk, first_attrs(7 - m), rng);
        CHECK_THROWS_AS(decrypt(bk, pk, sk_bad, re.ct), unauthorized_error);
    }
    SUBCASE("unauthorized key cannot re-encrypt") {
        const auto sk_weak = keygen(bk, pk, msk, first_attrs(7), rng);
        CHECK_THROWS_AS(contract_re(bk, pk, sk_weak, enc.ct, {9}, rng), unauthorized_error);
    }
}

TEST_CASE("size monotonicity over the removal sweep") {
    DebugPairing bk(Int(65521));
    SeededRng rng(41);
    const auto [pk, msk] = setup(bk, 10, rng);
    const auto policy = Policy::threshold_policy(8, 10, Int(65521));
    const auto enc = encrypt_star(bk, pk, GT{Int(9)}, policy, rng);
    std::size_t prev_sct = ciphertext_size(enc.ct).total_scalar_units();
    std::size_t prev_ect = prev_sct;
    for (int m = 1; m <= 7; ++m) {
        const auto q = first_attrs(m, 10 - m);
        const auto ck_q = restrict_ck(enc.ck, policy, q);
        const auto sct = ciphertext_size(contract_sct(bk, pk, enc.ct, q, ck_q));
        const auto ect = ciphertext_size(contract_ect(enc.ct, q, ck_q));
        CHECK(sct.total_scalar_units() < prev_sct);
        CHECK(ect.total_scalar_units() > prev_ect);
        CHECK(sct.group_elements() == 2 + 2 * (10 - m));
        CHECK(ect.ck_scalars == static_cast<std::size_t>(m));
        prev_sct = sct.total_scalar_units();
        prev_ect = ect.total_scalar_units();
    }
}

TEST_CASE("contracted row exponents match the relocated shares") {
    // dlog(C'_i) must equal a s'_i - r_i dlog(T_attr(i)) with s'_i the
    // linear-combination relocated share of the same removal.
    SeededRng rng(43);
    const auto corpus = testsupport::msp_corpus(15, 3030);
    int checked = 0;
    for (const auto& m : corpus) {
        DebugPairing bk(m.field().modulus());
        SeededRng setup_rng(checked + 1);
        const auto [pk, msk] = setup(bk, m.participants(), setup_rng);
        Policy policy{m, {}, std::nullopt};
        for (int i = 0; i < m.participants(); ++i) policy.attr_of.push_back(i);

        const auto gamma = realized_structure(m);
        for (SubsetMask q : testsupport::unauthorized_sets(gamma)) {
            if (popcount(q) == m.participants()) continue;
            const GT message = GT{rng.below(m.field().modulus())};
            const auto enc = encrypt_star(bk, pk, message, policy, rng);
            const auto q_attrs = mask_members(q);
            const auto ck_q = restrict_ck(enc.ck, policy, q_attrs);
            const auto contracted = contract_sct(bk, pk, enc.ct, q_attrs, ck_q);

            // relocated shares from the secret-sharing layer
            ShareVector sv;
            sv.by_participant.resize(m.participants());
            const std::vector<Int> tail(enc.sharing_vector.begin() + 1, enc.sharing_vector.end());
            const auto vals = row_values(m, enc.sharing_vector[0], tail);
            for (std::size_t r = 0; r < m.row_count(); ++r) {
                sv.by_participant[m.owner_of(r)].push_back(vals[r]);
            }
            const auto relocated = relocate_lc(m, q, sv);

            const Int a = bk.dlog(pk.g_a);
            const Field& f = m.field();
            for (std::size_t i = 0; i < contracted.c_rows.size(); ++i) {
                const int attr = contracted.policy.attribute_of_row(i);
                const std::size_t old_row = m.rows_of(attr)[0];
                const Int want = f.sub(f.mul(a, relocated.server_shares[i][0]),
                                       f.mul(enc.ck.r[old_row], bk.dlog(pk.t_attr[attr])));
                CHECK(bk.dlog(contracted.c_rows[i]) == want);
                ++checked;
            }
        }
        if (checked > 400) break;
    }
    CHECK(checked >= 100);
}

TEST_CASE("general (non-threshold) policies contract correctly") {
    const auto m = testsupport::toy_msp();
    DebugPairing bk(Int(2));
    SeededRng rng(47);
    const auto [pk, msk] = setup(bk, 4, rng);
    Policy policy{m, {0, 1, 2, 3}, std::nullopt};
    const GT message = GT{Int(1)};
    const auto enc = encrypt_star(bk, pk, message, policy, rng);
    const auto ck_q = restrict_ck(enc.ck, policy, {3});
    const auto contracted = contract_sct(bk, pk, enc.ct, {3}, ck_q);
    // contracted basis is {{1,2},{1,3}}: attribute sets {0,1} and {0,2} work
    const auto sk12 = keygen(bk, pk, msk, {0, 1}, rng);
    CHECK(decrypt(bk, pk, sk12, contracted) == message);
    const auto sk23 = keygen(bk, pk, msk, {1, 2}, rng);
    CHECK_THROWS_AS(decrypt(bk, pk, sk23, contracted), unauthorized_error);
}

TEST_CASE("abe json round-trips") {
    DebugPairing bk(Int(65521));
    SeededRng rng(53);
    const auto [pk, msk] = setup(bk, 5, rng);
    const auto policy = Policy::threshold_policy(3, 5, Int(65521));
    const auto enc = encrypt_star(bk, pk, GT{Int(31)}, policy, rng);
    const auto sk = keygen(bk, pk, msk, {0, 1, 2}, rng);

    const auto pk2 = pk_from_json(to_json(pk));
    CHECK(pk2.g_a == pk.g_a);
    CHECK(pk2.t_attr == pk.t_attr);
    CHECK(msk_from_json(to_json(msk, pk.order)).g_beta == msk.g_beta);
    const auto sk2 = sk_from_json(to_json(sk, pk.order));
    CHECK(sk2.attrs == sk.attrs);
    CHECK(sk2.k == sk.k);
    CHECK(sk2.k_attr == sk.k_attr);
    const auto ct2 = ct_from_json(to_json(enc.ct, pk.order));
    CHECK(ct2.c == enc.ct.c);
    CHECK(ct2.c_rows == enc.ct.c_rows);
    CHECK(decrypt(bk, pk2, sk2, ct2) == GT{Int(31)});
    const auto ck2 = ck_from_json(to_json(enc.ck, pk.order));
    CHECK(ck2.prf_seed == enc.ck.prf_seed);
    CHECK(ck2.r == enc.ck.r);
    const auto ckq = restrict_ck(enc.ck, policy, {4});
    CHECK(ckq_from_json(to_json(ckq, pk.order)) == ckq);
    CHECK_THROWS_AS(pk_from_json("{}"), validation_error);
    CHECK_THROWS_AS(ct_from_json(to_json(pk)), validation_error);
}
