#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lsss/msp.hpp"
#include "lsss/pairing.hpp"

namespace lsss::abe {

/// Ciphertext policy: a span-program scheme whose participants stand for
/// attributes of the universe. attr_of translates the scheme's internal
/// participant index to the universe attribute id, so contractions can
/// re-index rows while user keys keep their original attribute names.
struct Policy {
    Msp msp;
    std::vector<int> attr_of;      // scheme participant -> universe attribute
    std::optional<int> threshold;  // t when this is a t-of-k policy

    int attribute_of_row(std::size_t row) const { return attr_of[msp.owner_of(row)]; }
    /// Rows labelled by any of the given universe attributes, ascending.
    std::vector<std::size_t> rows_of_attributes(const std::vector<int>& attrs) const;

    /// t-of-n policy over attributes 0..n-1 (Shamir share matrix).
    static Policy threshold_policy(int t, int n, const Int& p);
};

struct PublicKey {
    std::string backend;  // backend name; keys only work with that backend
    Int order;
    G1 g;
    G1 g_a;
    GT e_gg_beta;
    std::vector<G1> t_attr;  // one group element per universe attribute

    int universe_size() const { return static_cast<int>(t_attr.size()); }
};

struct MasterKey {
    G1 g_beta;
};

struct PrivateKey {
    std::vector<int> attrs;  // sorted universe attribute ids
    G1 k;                    // g^beta g^{a tau}
    G1 l;                    // g^tau
    std::map<int, G1> k_attr;
};

struct Ciphertext {
    Policy policy;
    GT c;        // message * e(g,g)^{beta s}
    G1 c_prime;  // g^s
    std::vector<G1> c_rows;  // per row: g^{a s_i} T_{attr(i)}^{-r_i}
    std::vector<G1> d_rows;  // per row: g^{r_i}
    /// Extension-contracted ciphertexts carry disclosed per-row blinding
    /// scalars; those rows are decryptable by anyone holding the rest.
    std::vector<std::pair<std::size_t, Int>> disclosed_r;  // sorted by row
};

/// The owner-held randomness that makes ciphertext contraction possible:
/// one scalar per ciphertext row, either explicit or derived on demand
/// from a short PRF seed.
struct ContractionKey {
    std::vector<std::uint8_t> prf_seed;  // empty in explicit mode
    std::vector<Int> r;                  // always materialized, one per row

    bool prf_mode() const { return !prf_seed.empty(); }
};

/// Restriction of a contraction key to the rows of a removed attribute set.
using CkRestriction = std::map<std::size_t, Int>;

enum class CkMode { prf, explicit_list };

struct EncryptResult {
    Ciphertext ct;
    ContractionKey ck;
    std::vector<Int> sharing_vector;  // v = (s, v_2..v_d), audit output
};

std::pair<PublicKey, MasterKey> setup(const PairingBackend& bk, int universe_size, SeededRng& rng);

PrivateKey keygen(const PairingBackend& bk, const PublicKey& pk, const MasterKey& msk,
                  std::vector<int> attrs, SeededRng& rng);

/// Encrypt and also output the contraction key (PRF-derived by default).
EncryptResult encrypt_star(const PairingBackend& bk, const PublicKey& pk, const GT& message,
                           const Policy& policy, SeededRng& rng, CkMode mode = CkMode::prf);

/// Deterministic core: fixed sharing vector and per-row scalars.
Ciphertext encrypt_with(const PairingBackend& bk, const PublicKey& pk, const GT& message,
                        const Policy& policy, const std::vector<Int>& v,
                        const std::vector<Int>& r);

/// Row scalars a PRF seed expands to, one per policy row.
std::vector<Int> derive_ck_scalars(const std::vector<std::uint8_t>& seed, std::size_t rows,
                                   const Int& p);

/// Throws unauthorized_error("unauthorized attribute set") when the key's
/// attributes (plus any disclosed rows) cannot satisfy the policy; the
/// check runs before any pairing work.
GT decrypt(const PairingBackend& bk, const PublicKey& pk, const PrivateKey& sk,
           const Ciphertext& ct);

CkRestriction restrict_ck(const ContractionKey& ck, const Policy& policy,
                          const std::vector<int>& q_attrs);

/// Shrinking contraction: folds the rows of the removed attributes into
/// every surviving row and drops them. Output has strictly fewer
/// components than the input.
Ciphertext contract_sct(const PairingBackend& bk, const PublicKey& pk, const Ciphertext& ct,
                        const std::vector<int>& q_attrs, const CkRestriction& ck_q);

/// Extending contraction: appends the restricted key so the removed rows
/// become decryptable by everyone. Output grows by |ck_q| scalars.
Ciphertext contract_ect(const Ciphertext& ct, const std::vector<int>& q_attrs,
                        const CkRestriction& ck_q);

/// Baseline: decrypt with an authorized key and re-encrypt freshly under
/// the contracted policy.
EncryptResult contract_re(const PairingBackend& bk, const PublicKey& pk, const PrivateKey& sk,
                          const Ciphertext& ct, const std::vector<int>& q_attrs, SeededRng& rng,
                          CkMode mode = CkMode::prf);

struct CiphertextSize {
    std::size_t source_elements = 0;  // C' and all C_i, D_i
    std::size_t target_elements = 0;  // C
    std::size_t matrix_scalars = 0;   // share-matrix entries
    std::size_t map_entries = 0;      // row-to-attribute entries
    std::size_t ck_scalars = 0;       // disclosed r values
    std::size_t group_elements() const { return source_elements + target_elements; }
    std::size_t total_scalar_units() const {
        return source_elements + target_elements + matrix_scalars + map_entries + ck_scalars;
    }
};

CiphertextSize ciphertext_size(const Ciphertext& ct);

// JSON (de)serialization; every document embeds the backend identifier.
std::string to_json(const PublicKey&);
std::string to_json(const MasterKey&, const Int& order);
std::string to_json(const PrivateKey&, const Int& order);
std::string to_json(const Ciphertext&, const Int& order);
std::string to_json(const ContractionKey&, const Int& order);
std::string to_json(const CkRestriction&, const Int& order);
PublicKey pk_from_json(std::string_view);
MasterKey msk_from_json(std::string_view);
PrivateKey sk_from_json(std::string_view);
Ciphertext ct_from_json(std::string_view);
ContractionKey ck_from_json(std::string_view);
CkRestriction ckq_from_json(std::string_view);

}  // namespace lsss::abe
