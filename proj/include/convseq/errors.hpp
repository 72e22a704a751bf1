#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace convseq {

// Invalid argument or unsupported parameter combination.
class domain_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Structural check on input data failed; carries the first offending 1-based index.
class validation_error : public std::runtime_error {
public:
    validation_error(const std::string& what, std::size_t index)
        : std::runtime_error(what + " (index " + std::to_string(index) + ")"),
          index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

// A work or memory guard refused the requested computation.
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace convseq
