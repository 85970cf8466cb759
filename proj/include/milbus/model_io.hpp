#pragma once

#include <filesystem>

#include "milbus/model.hpp"

namespace milbus {

// Versioned JSON model file. Counts are stored exactly; probabilities and
// thresholds are stored as full-precision decimal strings and re-verified
// against the counts on load, so load(save(m)) == m bit for bit.
void save_model(const ModelPair& model, const std::filesystem::path& path);

// Throws ParseError on malformed or truncated files, ValidationError on a
// version mismatch or when the stored probabilities disagree with the
// stored counts.
ModelPair load_model(const std::filesystem::path& path);

}  // namespace milbus
