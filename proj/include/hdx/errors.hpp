#pragma once

#include <stdexcept>
#include <string>

namespace hdx {

// Precondition violated by the caller (bad root, zero inverse, illegal pair...).
class DomainError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

// A configured size/memory budget would be exceeded.
class ResourceError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

// An internal consistency check failed; indicates a bug in a realization or table.
class IntegrityError : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

}  // namespace hdx
