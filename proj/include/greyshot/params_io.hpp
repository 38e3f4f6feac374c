#pragma once
// Text serialization of trained GreyShot parameters:
//   greyshot-params v1 M N K a b
// followed by M rows of U and N rows of V, 17 significant digits each, which
// round-trips IEEE-754 doubles exactly.

#include <filesystem>
#include <iosfwd>

#include "greyshot/model.hpp"

namespace greyshot::io {

void write_params(std::ostream& out, const model::GreyShotParams& params);
void write_params(const std::filesystem::path& path, const model::GreyShotParams& params);

// Throws std::runtime_error on a malformed header or short/extra data.
model::GreyShotParams read_params(std::istream& in);
model::GreyShotParams read_params(const std::filesystem::path& path);

}  // namespace greyshot::io
