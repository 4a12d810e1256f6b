#include "lsss/access.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "lsss/errors.hpp"

namespace lsss {

SubsetMask mask_of(const std::vector<int>& participants) {
    SubsetMask m = 0;
    for (int p : participants) {
        if (p < 0 || p >= 64) throw validation_error("participant index out of range");
        m |= SubsetMask(1) << p;
    }
    return m;
}

std::vector<int> mask_members(SubsetMask m) {
    std::vector<int> out;
    for (int i = 0; i < 64; ++i) {
        if (m >> i & 1) out.push_back(i);
    }
    return out;
}

int popcount(SubsetMask m) { return std::popcount(m); }

SubsetMask full_mask(int n) {
    if (n < 0 || n > 64) throw validation_error("participant count out of range");
    return n == 64 ? ~SubsetMask(0) : (SubsetMask(1) << n) - 1;
}

namespace {

std::vector<SubsetMask> minimize(std::vector<SubsetMask> sets) {
    std::sort(sets.begin(), sets.end(), [](SubsetMask a, SubsetMask b) {
        const int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    std::vector<SubsetMask> out;
    for (SubsetMask s : sets) {
        bool redundant = false;
        for (SubsetMask kept : out) {
            if ((kept & s) == kept) {  // kept ⊆ s
                redundant = true;
                break;
            }
        }
        if (!redundant) out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

AccessStructure::AccessStructure(int n, std::vector<SubsetMask> basis) : n_(n) {
    const SubsetMask all = full_mask(n);
    for (SubsetMask s : basis) {
        if (s == 0) throw validation_error("access structure basis contains the empty set");
        if ((s & ~all) != 0) throw validation_error("basis member references unknown participant");
    }
    basis_ = minimize(std::move(basis));
}

bool AccessStructure::is_authorized(SubsetMask a) const {
    const SubsetMask all = full_mask(n_);
    if ((a & ~all) != 0) throw validation_error("subset references unknown participant");
    for (SubsetMask s : basis_) {
        if ((s & a) == s) return true;
    }
    return false;
}

bool AccessStructure::is_connected() const {
    SubsetMask covered = 0;
    for (SubsetMask s : basis_) covered |= s;
    return covered == full_mask(n_);
}

ContractedStructure AccessStructure::contract(SubsetMask q) const {
    const SubsetMask all = full_mask(n_);
    if ((q & ~all) != 0) throw validation_error("subset references unknown participant");
    std::vector<int> index_map = mask_members(all & ~q);
    const int nn = static_cast<int>(index_map.size());
    std::vector<int> new_of(n_, -1);
    for (int i = 0; i < nn; ++i) new_of[index_map[i]] = i;

    std::vector<SubsetMask> new_basis;
    if (is_authorized(q)) {
        for (int i = 0; i < nn; ++i) new_basis.push_back(SubsetMask(1) << i);
    } else {
        for (SubsetMask s : basis_) {
            SubsetMask cut = 0;
            for (int old : mask_members(s & ~q)) cut |= SubsetMask(1) << new_of[old];
            new_basis.push_back(cut);  // nonempty: s ⊆ q would make q authorized
        }
    }
    return ContractedStructure{AccessStructure(nn, std::move(new_basis)), std::move(index_map)};
}

AccessStructure AccessStructure::threshold(int t, int n) {
    if (n < 1 || n > 20) throw validation_error("threshold structure needs 1 <= n <= 20");
    if (t < 1 || t > n) throw validation_error("threshold needs 1 <= t <= n");
    std::vector<SubsetMask> basis;
    // All t-subsets, by mask enumeration.
    for (SubsetMask m = 0; m < (SubsetMask(1) << n); ++m) {
        if (std::popcount(m) == t) basis.push_back(m);
    }
    return AccessStructure(n, std::move(basis));
}

std::optional<int> AccessStructure::threshold_value() const {
    if (basis_.empty()) return std::nullopt;
    const int t = std::popcount(basis_[0]);
    for (SubsetMask s : basis_) {
        if (std::popcount(s) != t) return std::nullopt;
    }
    // C(n, t) members, all of size t <=> every t-subset present.
    std::uint64_t expect = 1;
    for (int i = 0; i < t; ++i) expect = expect * (n_ - i) / (i + 1);
    if (basis_.size() != expect) return std::nullopt;
    return t;
}

std::string AccessStructure::to_text() const {
    std::ostringstream out;
    out << "n=" << n_ << "; basis=";
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (i) out << ",";
        out << "{";
        const auto members = mask_members(basis_[i]);
        for (std::size_t j = 0; j < members.size(); ++j) {
            if (j) out << ",";
            out << members[j] + 1;
        }
        out << "}";
    }
    return out.str();
}

AccessStructure AccessStructure::from_text(std::string_view text) {
    std::string s(text);
    std::erase_if(s, [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
    if (!s.starts_with("n=")) throw validation_error("access structure text must start with n=");
    std::size_t pos = 2;
    std::size_t semi = s.find(';', pos);
    if (semi == std::string::npos) throw validation_error("missing ';' in access structure text");
    const int n = std::stoi(s.substr(pos, semi - pos));
    pos = semi + 1;
    if (s.compare(pos, 6, "basis=") != 0) throw validation_error("missing basis= in access structure text");
    pos += 6;
    std::vector<SubsetMask> basis;
    while (pos < s.size()) {
        if (s[pos] == ',') {
            ++pos;
            continue;
        }
        if (s[pos] != '{') throw validation_error("expected '{' in basis list");
        const std::size_t close = s.find('}', pos);
        if (close == std::string::npos) throw validation_error("unterminated basis set");
        std::vector<int> members;
        std::istringstream in(s.substr(pos + 1, close - pos - 1));
        std::string tok;
        while (std::getline(in, tok, ',')) {
            if (tok.empty()) continue;
            const int one_based = std::stoi(tok);
            if (one_based < 1 || one_based > n) {
                throw validation_error("basis member out of range in text form");
            }
            members.push_back(one_based - 1);
        }
        basis.push_back(mask_of(members));
        pos = close + 1;
    }
    return AccessStructure(n, std::move(basis));
}

}  // namespace lsss
