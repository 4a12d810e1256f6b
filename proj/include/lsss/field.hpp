#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace lsss {

using Int = boost::multiprecision::cpp_int;

/// Prime field F_p. Elements are plain Int values kept in canonical form
/// [0, p); the Field object carries the modulus and does all arithmetic.
/// Moduli of any size are supported behind the same interface (the small
/// schemes run over F_2/F_3/F_5, the pairing layer over a 160-bit prime).
class Field {
  public:
    explicit Field(Int modulus);

    const Int& modulus() const { return p_; }

    Int reduce(const Int& x) const;
    Int add(const Int& a, const Int& b) const;
    Int sub(const Int& a, const Int& b) const;
    Int mul(const Int& a, const Int& b) const;
    Int neg(const Int& a) const;
    Int inv(const Int& a) const;  // throws validation_error on 0
    Int div(const Int& a, const Int& b) const { return mul(a, inv(b)); }
    Int pow(const Int& base, const Int& exp) const;

    bool operator==(const Field& other) const { return p_ == other.p_; }

  private:
    Int p_;
};

/// Deterministic random source. All randomized operations take one of
/// these explicitly; equal seeds give identical results on any platform
/// (mt19937_64 word stream plus rejection sampling).
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t word() { return gen_(); }

    /// Uniform value in [0, bound). bound must be positive.
    Int below(const Int& bound);

    /// Uniform field element.
    Int element(const Field& f) { return below(f.modulus()); }

    std::vector<std::uint8_t> bytes(std::size_t count);

  private:
    std::mt19937_64 gen_;
};

bool is_prime(const Int& n);

}  // namespace lsss
