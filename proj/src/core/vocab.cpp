#include "core/vocab.hpp"

namespace kgsem {

std::int32_t Interner::intern(const std::string& label) {
    if (label.empty()) {
        throw Error(ErrorCode::validation, "empty label cannot be interned");
    }
    auto it = ids_.find(label);
    if (it != ids_.end()) return it->second;
    auto id = static_cast<std::int32_t>(labels_.size());
    labels_.push_back(label);
    ids_.emplace(label, id);
    return id;
}

std::int32_t Interner::find(const std::string& label) const {
    auto it = ids_.find(label);
    return it == ids_.end() ? kNoId : it->second;
}

const std::string& Interner::label(std::int32_t id) const {
    if (id < 0 || id >= size()) {
        throw Error(ErrorCode::validation, "id " + std::to_string(id) + " out of range");
    }
    return labels_[static_cast<std::size_t>(id)];
}

}  // namespace kgsem
