#pragma once

#include <iosfwd>
#include <string>

#include "dpstream/engine.hpp"

namespace dpstream {

// JSON engine state. Loading validates structure and throws InputError on
// malformed documents.
void save_state(std::ostream& out, const EngineImage& image);
EngineImage load_state(std::istream& in);
void save_state_file(const std::string& path, const EngineImage& image);
EngineImage load_state_file(const std::string& path);

}  // namespace dpstream
