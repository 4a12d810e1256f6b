#pragma once

#include <stdexcept>
#include <string>

namespace lsss {

// Bad input: dimension mismatch, out-of-range index, malformed file, ...
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// An operation was asked to act on/for a set that the access structure
// does not permit (reconstruction by an unauthorized set, contraction at
// an authorized set, decryption with an unsatisfying attribute set).
struct unauthorized_error : std::runtime_error {
    explicit unauthorized_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lsss
