#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "core/types.hpp"

namespace kgsem {

// Bidirectional string <-> dense id map. Ids are assigned contiguously from 0
// in first-insertion order.
class Interner {
public:
    std::int32_t intern(const std::string& label);

    // Returns kNoId when the label is unknown.
    std::int32_t find(const std::string& label) const;

    const std::string& label(std::int32_t id) const;

    std::int32_t size() const { return static_cast<std::int32_t>(labels_.size()); }

    const std::vector<std::string>& labels() const { return labels_; }

private:
    std::unordered_map<std::string, std::int32_t> ids_;
    std::vector<std::string> labels_;
};

struct Vocabulary {
    Interner entities;
    Interner relations;
    Interner classes;
};

}  // namespace kgsem
