#pragma once

namespace dpo {

inline constexpr const char* kArtifactVersion = "0.1.0";

}  // namespace dpo
