#include "milbus/logging.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace milbus {

LogLevel current_log_level() {
    static LogLevel level = [] {
        const char* env = std::getenv("MILBUS_LOG_LEVEL");
        if (!env)
            return LogLevel::Warn;
        if (std::strcmp(env, "error") == 0) return LogLevel::Error;
        if (std::strcmp(env, "warn") == 0) return LogLevel::Warn;
        if (std::strcmp(env, "info") == 0) return LogLevel::Info;
        if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
        std::fprintf(stderr, "[warn] unknown MILBUS_LOG_LEVEL '%s', using warn\n", env);
        return LogLevel::Warn;
    }();
    return level;
}

void log_message(LogLevel level, const std::string& message) {
    if (level > current_log_level())
        return;
    const char* tag = "debug";
    switch (level) {
        case LogLevel::Error: tag = "error"; break;
        case LogLevel::Warn: tag = "warn"; break;
        case LogLevel::Info: tag = "info"; break;
        case LogLevel::Debug: tag = "debug"; break;
    }
    std::fprintf(stderr, "[%s] %s\n", tag, message.c_str());
}

}  // namespace milbus
