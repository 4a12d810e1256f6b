#include "lsss/field.hpp"

#include <boost/multiprecision/miller_rabin.hpp>

#include "lsss/errors.hpp"

namespace lsss {

bool is_prime(const Int& n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    if (n < (1 << 20)) {
        for (Int d = 3; d * d <= n; d += 2) {
            if (n % d == 0) return false;
        }
        return true;
    }
    // Large moduli: probabilistic test with a fixed engine so construction
    // stays deterministic.
    std::mt19937_64 eng(0x5eed);
    return boost::multiprecision::miller_rabin_test(n, 25, eng);
}

Field::Field(Int modulus) : p_(std::move(modulus)) {
    if (!is_prime(p_)) {
        throw validation_error("field modulus " + p_.str() + " is not prime");
    }
}

Int Field::reduce(const Int& x) const {
    Int r = x % p_;
    if (r < 0) r += p_;
    return r;
}

Int Field::add(const Int& a, const Int& b) const {
    Int r = a + b;
    if (r >= p_) r -= p_;
    return r;
}

Int Field::sub(const Int& a, const Int& b) const {
    Int r = a - b;
    if (r < 0) r += p_;
    return r;
}

Int Field::mul(const Int& a, const Int& b) const { return (a * b) % p_; }

Int Field::neg(const Int& a) const { return a == 0 ? Int(0) : Int(p_ - a); }

Int Field::inv(const Int& a) const {
    if (a == 0) throw validation_error("division by zero in F_" + p_.str());
    return pow(a, p_ - 2);
}

Int Field::pow(const Int& base, const Int& exp) const {
    return boost::multiprecision::powm(base, exp, p_);
}

Int SeededRng::below(const Int& bound) {
    if (bound <= 0) throw validation_error("rng bound must be positive");
    if (bound == 1) return 0;
    const unsigned bits = boost::multiprecision::msb(bound) + 1;
    const unsigned words = (bits + 63) / 64;
    for (;;) {
        Int x = 0;
        for (unsigned i = 0; i < words; ++i) {
            x <<= 64;
            x |= Int(gen_());
        }
        x >>= (words * 64 - bits);
        if (x < bound) return x;
    }
}

std::vector<std::uint8_t> SeededRng::bytes(std::size_t count) {
    std::vector<std::uint8_t> out(count);
    std::uint64_t w = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (i % 8 == 0) w = gen_();
        out[i] = static_cast<std::uint8_t>(w >> (8 * (i % 8)));
    }
    return out;
}

}  // namespace lsss
