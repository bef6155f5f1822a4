#pragma once

#include <functional>
#include <string>

namespace tmss::diagnostics {

// Warnings are routed through a single sink so that callers (tests, the CLI)
// can capture or silence them. Each distinct key is reported once per process
// unless reset() is called.
using Sink = std::function<void(const std::string& key, const std::string& message)>;

void set_sink(Sink sink);
void reset();
void warn(const std::string& key, const std::string& message);
int warning_count();

}  // namespace tmss::diagnostics
