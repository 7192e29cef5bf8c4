#include <atomic>
#include <cstdlib>
#include <string_view>

#include "robclust/simd.hpp"

namespace robclust::simd {

#ifndef ROBCLUST_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif
#ifndef ROBCLUST_HAVE_NEON
const KernelTable* neon_table() { return nullptr; }
#endif

namespace {

bool cpu_has_avx2() {
#if defined(ROBCLUST_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* table_for(Level level) {
    switch (level) {
    case Level::scalar: return &scalar_table();
    case Level::avx2: return cpu_has_avx2() ? avx2_table() : nullptr;
    case Level::neon: return neon_table(); // baseline on aarch64
    }
    return nullptr;
}

Level best_available() {
    if (table_for(Level::avx2)) return Level::avx2;
    if (table_for(Level::neon)) return Level::neon;
    return Level::scalar;
}

struct State {
    std::atomic<Level> level;
    std::atomic<const KernelTable*> table;
    State() {
        Level l = detect_level();
        level.store(l);
        table.store(table_for(l));
    }
};

State& state() {
    static State s;
    return s;
}

} // namespace

Level detect_level() {
    const char* env = std::getenv("ROBCLUST_SIMD");
    if (env) {
        std::string_view v(env);
        if (v == "scalar") return Level::scalar;
        if (v == "avx2" && table_for(Level::avx2)) return Level::avx2;
        if (v == "neon" && table_for(Level::neon)) return Level::neon;
    }
    return best_available();
}

Level active_level() { return state().level.load(); }

bool set_level(Level level) {
    const KernelTable* t = table_for(level);
    if (!t) return false;
    state().table.store(t);
    state().level.store(level);
    return true;
}

std::string_view level_name(Level level) {
    switch (level) {
    case Level::scalar: return "scalar";
    case Level::avx2: return "avx2";
    case Level::neon: return "neon";
    }
    return "?";
}

const KernelTable& kernels() { return *state().table.load(std::memory_order_relaxed); }

} // namespace robclust::simd
