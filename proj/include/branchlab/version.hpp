#pragma once

namespace branchlab {

inline constexpr const char* kToolName = "branchlab";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace branchlab
