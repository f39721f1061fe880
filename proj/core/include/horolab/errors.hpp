#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace horolab {

// Input violates a documented precondition (bad parameters, invalid domain).
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A truncation budget, iteration cap or precision floor could not be met.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Evaluation requested exactly at a simple pole. Carries the pole location and
// its residue so callers can do residue arithmetic instead of parsing messages.
class pole_error : public std::runtime_error {
public:
    pole_error(const std::string& what, std::complex<double> location,
               std::complex<double> residue)
        : std::runtime_error(what), location(location), residue(residue) {}

    std::complex<double> location;
    std::complex<double> residue;
};

}  // namespace horolab
