#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kgsem {

using EntityId = std::int32_t;
using RelationId = std::int32_t;
using ClassId = std::int32_t;

constexpr std::int32_t kNoId = -1;

struct Triple {
    EntityId h;
    RelationId r;
    EntityId t;

    friend bool operator==(const Triple&, const Triple&) = default;
    friend auto operator<=>(const Triple&, const Triple&) = default;
};

enum class ErrorCode {
    io = 1,
    parse = 2,
    validation = 3,
    config = 4,
    schema = 5,
    numeric = 6,
    eval = 7,
    unknown = 8,
};

// All core failures surface as Error; the C API maps `code` to a status enum.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace kgsem
