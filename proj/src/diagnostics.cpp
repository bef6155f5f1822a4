#include "tmss/diagnostics.hpp"

#include <iostream>
#include <mutex>
#include <set>

namespace tmss::diagnostics {
namespace {

struct State {
    std::mutex mutex;
    std::set<std::string> seen;
    int count = 0;
    Sink sink = [](const std::string& key, const std::string& message) {
        std::cerr << "tmss: warning=" << key << " message=\"" << message << "\"\n";
    };
};

State& state()
{
    static State s;
    return s;
}

}  // namespace

void set_sink(Sink sink)
{
    std::lock_guard lock(state().mutex);
    state().sink = std::move(sink);
}

void reset()
{
    std::lock_guard lock(state().mutex);
    state().seen.clear();
    state().count = 0;
}

void warn(const std::string& key, const std::string& message)
{
    std::lock_guard lock(state().mutex);
    ++state().count;
    if (!state().seen.insert(key).second) return;
    if (state().sink) state().sink(key, message);
}

int warning_count()
{
    std::lock_guard lock(state().mutex);
    return state().count;
}

}  // namespace tmss::diagnostics
