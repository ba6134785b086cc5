#pragma once

#include <stdexcept>
#include <string>

namespace radoppler {

// Bad files, bad configs, contract violations on user-supplied data.
// The CLI maps these to exit status 2.
class InvalidInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input is well formed but carries no usable signal (all-zero spectrogram,
// corner frequency below two bins, ...).
class DegenerateInput : public InvalidInput {
public:
    explicit DegenerateInput(const std::string& what)
        : InvalidInput("degenerate input: " + what) {}
};

// Broken internal invariant. Exit status 1.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace radoppler
