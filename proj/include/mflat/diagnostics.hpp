#pragma once

#include <functional>
#include <string>

namespace mflat::diag {

using Sink = std::function<void(const std::string&)>;

/// Replace the warning sink (default writes "warning: ..." to stderr).
/// Passing an empty function restores the default. Not meant to be swapped
/// while other threads are emitting warnings.
void set_sink(Sink sink);

void warn(const std::string& message);

}  // namespace mflat::diag
