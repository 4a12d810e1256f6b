#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lsss/access.hpp"
#include "lsss/msp.hpp"
#include "lsss/relocate.hpp"

namespace lsss {

/// One step of a storage scenario. Server sets are masks over the
/// scenario's original server indices.
struct Event {
    enum class Kind { distribute, remove, reconstruct, snapshot };
    Kind kind = Kind::distribute;
    SubsetMask servers = 0;          // remove: the set leaving; reconstruct: the readers
    Method method = Method::lc;      // remove only
    std::uint64_t secret_index = 0;  // reconstruct only
};

/// A deterministic multi-cloud storage scenario: a dealer shares z secrets
/// to n servers under a threshold (Shamir) or an explicit ideal scheme,
/// then removal/reconstruction/snapshot events play out in order.
///
/// z secrets are simulated analytically by default: one representative
/// secret is stored materially and storage counts scale by z (relocation
/// topology is secret-independent). material = true stores all z.
struct Scenario {
    int n = 0;
    std::optional<int> t;         // threshold mode: Shamir over p
    std::optional<Msp> msp;       // explicit-scheme mode (ideal, <= 20 servers)
    Int p = 0;
    std::uint64_t share_bits = 16;
    std::uint64_t z = 1;
    std::uint64_t seed = 0;
    bool material = false;
    std::vector<Event> events;

    std::string to_json() const;
    static Scenario from_json(std::string_view text);
};

struct EventRecord {
    std::size_t event_index = 0;
    std::string kind;
    std::uint64_t bytes_moved = 0;  // bits, across all z secrets
};

struct ReconstructionRecord {
    std::size_t event_index = 0;
    bool success = false;
    Int value = 0;            // when success
    std::string refusal;      // when refused
};

struct SimReport {
    std::vector<StorageMetrics> snapshots;
    std::vector<EventRecord> events;
    std::vector<ReconstructionRecord> reconstructions;
    std::vector<Int> distributed_secrets;  // material: z entries; analytic: 1

    /// Deterministic CSV rendering; identical scenarios give identical bytes.
    std::string to_csv() const;
};

/// Validates the whole event list first (bad scenarios never execute),
/// then runs it. Insufficient RECONSTRUCT sets are refusals in the report,
/// not errors.
SimReport run(const Scenario& scenario);

/// Storage/rate sweep for a (t, n) threshold deployment: for m = 0..t-1
/// and each method, removes the last m servers and reports metrics.
/// Returns CSV rows "method,m,L_bits,L_MiB,rho".
std::string sweep_fig1(int n, int t, std::uint64_t share_bits, std::uint64_t z);

/// The same sweep as two gnuplot-ready blocks (storage in MiB, then rate).
std::string sweep_fig1_plot_data(int n, int t, std::uint64_t share_bits, std::uint64_t z);

}  // namespace lsss
