#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lsss/access.hpp"
#include "lsss/msp.hpp"

namespace lsss {

/// How the shares of a removed server set get relocated:
///   lc - surviving servers fold Q's shares into their own by a fixed
///        linear combination; no site stores anything extra.
///   ps - Q's shares move verbatim to a public storage site.
///   is - every surviving server stores a full copy of Q's shares.
///   cs - Q's shares are replicated so that every authorized set can
///        collectively reassemble them.
enum class Method { lc, ps, is, cs };

const char* method_name(Method m);
Method method_from_name(std::string_view name);

/// Post-relocation storage layout plus the scheme that reconstructs from it.
struct RelocationOutcome {
    Method method;
    /// lc: the contracted scheme; is: the appended-rows scheme; ps/cs: the
    /// original scheme (reconstruction recipe described by the fields below).
    Msp scheme;
    std::vector<int> index_map;                    // new server index -> old
    std::vector<std::vector<Int>> server_shares;   // per new server
    std::vector<std::size_t> q_rows;               // removed rows of the input scheme
    std::vector<Int> q_values;                     // their share values
    std::vector<Int> public_shares;                // ps only (== q_values)
    std::vector<std::vector<int>> replica_holders; // cs: per q_row, new servers with a copy
};

RelocationOutcome relocate_lc(const Msp& m, SubsetMask q, const ShareVector& shares);

/// Independent route to the lc result: find a sharing vector v' of zero
/// that explains Q's shares, then subtract h_i . v' from every surviving
/// share. Exists as a cross-check for relocate_lc; the two must agree
/// element for element.
RelocationOutcome relocate_lc_oracle(const Msp& m, SubsetMask q, const ShareVector& shares);

RelocationOutcome relocate_ps(const Msp& m, SubsetMask q, const ShareVector& shares);
RelocationOutcome relocate_is(const Msp& m, SubsetMask q, const ShareVector& shares);
/// gamma must be the structure the scheme realizes; threshold structures
/// get balanced round-robin replica placement, anything else a greedy
/// hitting set over the contracted basis.
RelocationOutcome relocate_cs(const Msp& m, SubsetMask q, const ShareVector& shares,
                              const AccessStructure& gamma);

/// Reconstruct the secret from the storage reachable by the surviving
/// server set `a` (new indices), including public storage for ps and
/// replica copies for cs. Throws unauthorized_error when that storage
/// cannot determine the secret.
Int reconstruct_from(const RelocationOutcome& out, SubsetMask a);

/// Row indices of out.scheme whose values are reachable by `a`.
std::vector<std::size_t> reachable_rows(const RelocationOutcome& out, SubsetMask a);

struct StorageMetrics {
    std::uint64_t server_elements = 0;      // per secret, summed over servers
    std::uint64_t public_elements = 0;      // per secret
    std::uint64_t max_server_elements = 0;  // per secret, max over one server
    std::uint64_t share_bits = 0;
    std::uint64_t secret_count = 0;  // z

    std::uint64_t total_bits() const {
        return (server_elements + public_elements) * share_bits * secret_count;
    }
    double total_mib() const { return static_cast<double>(total_bits()) / (8.0 * 1048576.0); }
    /// Information rate is 1 / (elements the fullest server keeps per secret).
    std::uint64_t rho_inverse() const { return max_server_elements; }
    double rho() const { return 1.0 / static_cast<double>(max_server_elements); }
};

/// Measured from the actual outcome contents (never from closed forms).
StorageMetrics metrics(const RelocationOutcome& out, std::uint64_t share_bits, std::uint64_t z);

/// CSV row: method, n, t, m, share_bits, z, L_bits, rho.
std::string metrics_csv_row(Method method, int n, int t, int m, const StorageMetrics& sm);

}  // namespace lsss
