// diagnostics.hpp: Process-wide warning sink (stderr by default, silenceable)

#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace tcrelax::diag {

using Sink = std::function<void(std::string_view)>;

/// Replaces the active sink and returns the previous one. An empty sink
/// drops warnings.
Sink set_sink(Sink sink);

void warn(std::string_view message);

/// Number of warnings emitted since process start (sink-independent).
std::size_t warning_count();

} // namespace tcrelax::diag
