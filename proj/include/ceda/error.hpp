#pragma once

#include <stdexcept>
#include <string>

namespace ceda {

/// Invalid or inconsistent input data (bad cells, length mismatch, NaN, ...).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid run configuration (unknown column, bad threshold, ...).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_data(bool ok, const std::string& what) {
    if (!ok) throw DataError(what);
}

inline void require_config(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

} // namespace detail
} // namespace ceda
