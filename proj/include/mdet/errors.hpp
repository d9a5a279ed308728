#pragma once
#include <stdexcept>
#include <string>

namespace mdet {

// Base class for all library errors.
struct error : std::runtime_error {
    explicit error(const std::string& m) : std::runtime_error(m) {}
};

// Input outside the mathematical domain of an operation.
struct domain_error : error {
    explicit domain_error(const std::string& m) : error(m) {}
};

// Working precision was insufficient to certify a result.
struct precision_error : error {
    explicit precision_error(const std::string& m) : error(m) {}
};

// Bundled data files missing or malformed.
struct data_error : error {
    explicit data_error(const std::string& m) : error(m) {}
};

// A certified computation contradicts an asserted identity.
struct verify_error : error {
    explicit verify_error(const std::string& m) : error(m) {}
};

// A q-expansion is too short for the requested operation.
struct truncation_error : precision_error {
    explicit truncation_error(const std::string& m) : precision_error(m) {}
};

} // namespace mdet
