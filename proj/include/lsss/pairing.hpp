#pragma once

#include <string>
#include <string_view>

#include "lsss/field.hpp"

namespace lsss::abe {

/// Source-group and target-group element handles. The debug backend keeps
/// the discrete log as the representation; a curve backend would keep an
/// encoded point behind the same handle.
struct G1 {
    Int v;
    bool operator==(const G1&) const = default;
};
struct GT {
    Int v;
    bool operator==(const GT&) const = default;
};

/// Symmetric bilinear pairing over groups of prime order p with generator
/// g: e(u^a, v^b) = e(u, v)^{ab} and e(g, g) != 1.
class PairingBackend {
  public:
    virtual ~PairingBackend() = default;

    virtual std::string name() const = 0;
    virtual const Int& order() const = 0;

    virtual G1 generator() const = 0;
    virtual G1 g_pow(const Int& x) const = 0;  // generator^x
    virtual G1 mul(const G1& a, const G1& b) const = 0;
    virtual G1 pow(const G1& a, const Int& x) const = 0;
    virtual G1 inverse(const G1& a) const = 0;

    virtual GT pair(const G1& a, const G1& b) const = 0;
    virtual GT gt_identity() const = 0;
    virtual GT gt_mul(const GT& a, const GT& b) const = 0;
    virtual GT gt_pow(const GT& a, const Int& x) const = 0;
    virtual GT gt_inverse(const GT& a) const = 0;

    virtual G1 hash_to_group(std::string_view input) const = 0;
    virtual Int random_scalar(SeededRng& rng) const = 0;
};

/// INSECURE verification backend: g^x is represented by x itself, group
/// multiplication is addition of exponents and e(g^x, g^y) = e(g,g)^{xy}
/// is exponent multiplication. Every protocol identity becomes an exact
/// modular-arithmetic check, and discrete log is trivial by construction;
/// never use outside testing and desk experiments.
class DebugPairing final : public PairingBackend {
  public:
    explicit DebugPairing(Int order) : fp_(std::move(order)) {}

    std::string name() const override { return "debug"; }
    const Int& order() const override { return fp_.modulus(); }

    G1 generator() const override { return G1{Int(1)}; }
    G1 g_pow(const Int& x) const override { return G1{fp_.reduce(x)}; }
    G1 mul(const G1& a, const G1& b) const override { return G1{fp_.add(a.v, b.v)}; }
    G1 pow(const G1& a, const Int& x) const override { return G1{fp_.mul(a.v, fp_.reduce(x))}; }
    G1 inverse(const G1& a) const override { return G1{fp_.neg(a.v)}; }

    GT pair(const G1& a, const G1& b) const override { return GT{fp_.mul(a.v, b.v)}; }
    GT gt_identity() const override { return GT{Int(0)}; }
    GT gt_mul(const GT& a, const GT& b) const override { return GT{fp_.add(a.v, b.v)}; }
    GT gt_pow(const GT& a, const Int& x) const override { return GT{fp_.mul(a.v, fp_.reduce(x))}; }
    GT gt_inverse(const GT& a) const override { return GT{fp_.neg(a.v)}; }

    G1 hash_to_group(std::string_view input) const override;
    Int random_scalar(SeededRng& rng) const override { return rng.below(fp_.modulus()); }

    // Exact discrete logs, for tests that pin down exponent identities.
    const Int& dlog(const G1& a) const { return a.v; }
    const Int& dlog(const GT& a) const { return a.v; }

  private:
    Field fp_;
};

/// Keyed hash into Z_p: uniform via rejection sampling over a counter-mode
/// SHA-256 stream. Deterministic across platforms.
Int hash_to_scalar(std::string_view domain, std::string_view data, const Int& p);

}  // namespace lsss::abe
