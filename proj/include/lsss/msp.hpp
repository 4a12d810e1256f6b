#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lsss/access.hpp"
#include "lsss/field.hpp"
#include "lsss/matrix.hpp"

namespace lsss {

/// Monotone span program: a share matrix H (l x d) over F_p, the fixed
/// target vector (1,0,...,0), and a surjective map from rows to
/// participants. Equivalently, a linear secret sharing scheme: shares are
/// the inner products h_j . v for a sharing vector v = (secret, r_2..r_d),
/// and a set reconstructs iff the target lies in the span of its rows.
class Msp {
  public:
    Msp(Field field, Matrix share_matrix, std::vector<int> row_owner, int participants);

    const Field& field() const { return field_; }
    const Matrix& matrix() const { return h_; }
    std::size_t row_count() const { return h_.rows(); }
    std::size_t width() const { return h_.cols(); }  // d
    int participants() const { return participants_; }
    int owner_of(std::size_t row) const { return row_owner_[row]; }
    const std::vector<int>& row_owners() const { return row_owner_; }

    std::vector<Int> target() const;  // (1,0,...,0)

    /// One field element per participant per row: l == n with a bijective map.
    bool ideal() const;

    /// Row indices owned by one participant / by a set, ascending.
    std::vector<std::size_t> rows_of(int participant) const;
    std::vector<std::size_t> rows_of_set(SubsetMask a) const;

    /// n x t Vandermonde scheme on distinct nonzero points (default 1..n):
    /// row i is (x_i^0, ..., x_i^{t-1}). Realizes the (t, n) threshold
    /// structure; requires p > n.
    static Msp shamir(int t, int n, const Int& p,
                      const std::optional<std::vector<Int>>& xs = std::nullopt);

    std::string to_text() const;
    static Msp from_text(std::string_view text);

    bool operator==(const Msp& other) const;

  private:
    Field field_;
    Matrix h_;
    std::vector<int> row_owner_;
    int participants_;
};

/// Shares grouped by participant; participant i holds one value per row it
/// owns, in ascending row order.
struct ShareVector {
    std::vector<std::vector<Int>> by_participant;
};

struct Sharing {
    ShareVector shares;
    std::vector<Int> randomness;  // the random tail r_2..r_d of v
};

Sharing share(const Msp& m, const Int& secret, SeededRng& rng);
/// Deterministic core used by share() and by the encryption layer.
Sharing share_with(const Msp& m, const Int& secret, std::vector<Int> randomness);

/// Row values h_j . v for every row, in row order.
std::vector<Int> row_values(const Msp& m, const Int& secret, const std::vector<Int>& randomness);

/// Recover the secret from the shares held by `a`. Throws
/// unauthorized_error when the target is outside the span of a's rows.
Int reconstruct(const Msp& m, SubsetMask a, const ShareVector& shares);

/// The access structure the scheme realizes, by span test over all 2^n
/// subsets (n <= 20).
AccessStructure realized_structure(const Msp& m);

/// Result of contracting a scheme at an unauthorized set: the new scheme
/// plus the certificate needed to rewrite existing shares/ciphertexts.
struct Contraction {
    Msp msp;                          // scheme for the contracted structure
    std::vector<int> index_map;       // new participant -> old participant
    std::vector<std::size_t> w_rows;  // certificate W, original row indices
    std::vector<std::size_t> k_cols;  // certificate K, column indices
    Matrix u_inverse;
    std::optional<std::size_t> k;     // the single pivot column when |Q| = 1
};

/// Remove one unauthorized participant from an ideal scheme: with k the
/// smallest column >= 1 where q's row is nonzero, each surviving row
/// becomes h_i - (h_ik / h_qk) h_q.
Contraction contract_single(const Msp& m, int q);

/// Remove an unauthorized set: with U an invertible r x r submatrix of Q's
/// rows avoiding column 0 (r = rank of Q's rows), each surviving row
/// becomes h_i - (h_i)_K U^{-1} (h_w rows). Degenerates to contract_single
/// when |Q| = 1.
Contraction contract_multi(const Msp& m, SubsetMask q);

/// Text form of a share vector, with the sharing's random tail kept as an
/// audit record. Round-trip stable.
struct SharesDocument {
    Int modulus;
    ShareVector shares;
    std::vector<Int> randomness;
};
std::string shares_to_text(const SharesDocument& doc);
SharesDocument shares_from_text(std::string_view text);

}  // namespace lsss
