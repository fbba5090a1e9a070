#include "tcrelax/diagnostics.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace tcrelax::diag {

namespace {

std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}

Sink& active_sink() {
    static Sink sink = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
    return sink;
}

std::atomic<std::size_t> counter{0};

} // namespace

Sink set_sink(Sink sink) {
    std::lock_guard lock(sink_mutex());
    Sink previous = std::move(active_sink());
    active_sink() = std::move(sink);
    return previous;
}

void warn(std::string_view message) {
    ++counter;
    std::lock_guard lock(sink_mutex());
    if (active_sink()) active_sink()(message);
}

std::size_t warning_count() { return counter.load(); }

} // namespace tcrelax::diag
