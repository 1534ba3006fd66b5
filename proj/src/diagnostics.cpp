#include "mflat/diagnostics.hpp"

#include <iostream>

namespace mflat::diag {

namespace {

Sink& sink_slot() {
    static Sink sink;
    return sink;
}

}  // namespace

void set_sink(Sink sink) { sink_slot() = std::move(sink); }

void warn(const std::string& message) {
    if (const Sink& sink = sink_slot()) {
        sink(message);
    } else {
        std::cerr << "warning: " << message << '\n';
    }
}

}  // namespace mflat::diag
