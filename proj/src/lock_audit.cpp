#include "rtrl/lock_audit.hpp"

namespace rtrl {

const char* lock_class_name(LockClass c) {
    switch (c) {
        case LockClass::UpdateList: return "update_list";
        case LockClass::CurrentState: return "current_state";
        case LockClass::Policy: return "policy";
        case LockClass::Model: return "model";
    }
    return "?";
}

namespace lock_audit {
namespace {

std::array<std::atomic<std::uint64_t>, kLockClassCount> g_acquisitions{};
std::atomic<std::uint64_t> g_nested{0};
std::atomic<std::uint64_t> g_uncovered{0};

#ifdef RTRL_LOCK_AUDIT
// Per-thread count of held locks for each class.
thread_local std::array<int, kLockClassCount> t_held{};
#endif

}  // namespace

Counters snapshot() {
    Counters c{};
    for (int i = 0; i < kLockClassCount; ++i) c.acquisitions[i] = g_acquisitions[i].load();
    c.nested = g_nested.load();
    c.uncovered = g_uncovered.load();
    return c;
}

void reset() {
    for (auto& a : g_acquisitions) a.store(0);
    g_nested.store(0);
    g_uncovered.store(0);
}

#ifdef RTRL_LOCK_AUDIT
void on_lock(LockClass c) {
    const int idx = static_cast<int>(c);
    for (int i = 0; i < kLockClassCount; ++i) {
        if (t_held[i] > 0) {
            g_nested.fetch_add(1, std::memory_order_relaxed);
            break;
        }
    }
    ++t_held[idx];
    g_acquisitions[idx].fetch_add(1, std::memory_order_relaxed);
}

void on_unlock(LockClass c) { --t_held[static_cast<int>(c)]; }

void require_held(LockClass c) {
    if (t_held[static_cast<int>(c)] <= 0) g_uncovered.fetch_add(1, std::memory_order_relaxed);
}
#endif

}  // namespace lock_audit
}  // namespace rtrl
