#pragma once

namespace taxgraph {

inline constexpr const char* kToolName = "taxgraph";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace taxgraph
