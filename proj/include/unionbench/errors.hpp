#pragma once

#include <stdexcept>

namespace unionbench {

// Two error families; the CLI maps DataError to exit code 2 and
// ProviderError to exit code 3 (usage errors are 1).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ProviderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyInputError : DataError {
    using DataError::DataError;
};
struct MalformedCsvError : DataError {
    using DataError::DataError;
};
struct MissingSectionError : DataError {
    using DataError::DataError;
};
struct LayoutError : DataError {
    using DataError::DataError;
};
struct LeakageError : DataError {
    using DataError::DataError;
};
struct MissingQueryError : DataError {
    using DataError::DataError;
};
struct IoError : DataError {
    using DataError::DataError;
};

struct AuthMissingError : ProviderError {
    using ProviderError::ProviderError;
};
struct TokenLimitError : ProviderError {
    using ProviderError::ProviderError;
};

}  // namespace unionbench
