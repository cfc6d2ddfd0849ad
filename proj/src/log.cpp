#include "resofit/log.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <string>

namespace resofit::log {

namespace {

Level parse_env() {
    const char* env = std::getenv("RESOFIT_LOG");
    if (env == nullptr) return Level::warn;
    std::string v(env);
    if (v == "error") return Level::error;
    if (v == "warn") return Level::warn;
    if (v == "info") return Level::info;
    if (v == "debug") return Level::debug;
    return Level::warn;
}

std::atomic<int>& threshold_storage() {
    static std::atomic<int> value(static_cast<int>(parse_env()));
    return value;
}

const char* level_name(Level level) {
    switch (level) {
        case Level::error: return "error";
        case Level::warn: return "warn";
        case Level::info: return "info";
        case Level::debug: return "debug";
    }
    return "?";
}

} // namespace

Level threshold() { return static_cast<Level>(threshold_storage().load()); }

void set_threshold(Level level) { threshold_storage().store(static_cast<int>(level)); }

void write(Level level, const std::string& message) {
    if (static_cast<int>(level) > threshold_storage().load()) return;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    std::fprintf(stderr, "[resofit] %s: %s\n", level_name(level), message.c_str());
}

} // namespace resofit::log
