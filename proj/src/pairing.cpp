#include "lsss/pairing.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstring>

#include "lsss/errors.hpp"

namespace lsss::abe {

namespace {

std::array<std::uint8_t, 32> sha256(const std::uint8_t* data, std::size_t len) {
    std::array<std::uint8_t, 32> out{};
    unsigned int out_len = 0;
    if (EVP_Digest(data, len, out.data(), &out_len, EVP_sha256(), nullptr) != 1 || out_len != 32) {
        throw validation_error("sha256 failed");
    }
    return out;
}

}  // namespace

Int hash_to_scalar(std::string_view domain, std::string_view data, const Int& p) {
    if (p < 2) throw validation_error("hash_to_scalar needs a modulus >= 2");
    const unsigned bits = boost::multiprecision::msb(p) + 1;
    const std::size_t bytes = (bits + 7) / 8;

    std::vector<std::uint8_t> msg;
    msg.insert(msg.end(), domain.begin(), domain.end());
    msg.push_back(0);
    msg.insert(msg.end(), data.begin(), data.end());
    msg.push_back(0);
    msg.resize(msg.size() + 8);

    for (std::uint64_t counter = 0;; ++counter) {
        for (int i = 0; i < 8; ++i) {
            msg[msg.size() - 8 + i] = static_cast<std::uint8_t>(counter >> (8 * i));
        }
        // counter-mode stream of digest blocks, truncated to the modulus width
        std::vector<std::uint8_t> stream;
        std::uint32_t block = 0;
        while (stream.size() < bytes) {
            std::vector<std::uint8_t> in(msg);
            for (int i = 0; i < 4; ++i) in.push_back(static_cast<std::uint8_t>(block >> (8 * i)));
            const auto digest = sha256(in.data(), in.size());
            stream.insert(stream.end(), digest.begin(), digest.end());
            ++block;
        }
        stream.resize(bytes);
        if (bits % 8 != 0) stream[0] &= static_cast<std::uint8_t>((1u << (bits % 8)) - 1);
        Int x = 0;
        for (std::uint8_t b : stream) {
            x <<= 8;
            x |= Int(b);
        }
        if (x < p) return x;
    }
}

G1 DebugPairing::hash_to_group(std::string_view input) const {
    return G1{hash_to_scalar("lsss-hash-to-group", input, fp_.modulus())};
}

}  // namespace lsss::abe
