#pragma once

// Mutex wrapper tagged with one of the four shared-variable classes of the
// parallel agent. In builds with RTRL_LOCK_AUDIT defined every acquisition is
// tracked per thread so that tests can assert two properties:
//   - coverage: guarded data is only touched while its class is held;
//   - ordering: no thread ever holds locks of two classes at once.
// Without RTRL_LOCK_AUDIT the wrapper is a plain std::mutex.

#include <array>
#include <atomic>
#include <cstdint>
#include <mutex>

namespace rtrl {

enum class LockClass : std::uint8_t { UpdateList = 0, CurrentState = 1, Policy = 2, Model = 3 };
inline constexpr int kLockClassCount = 4;

const char* lock_class_name(LockClass c);

namespace lock_audit {

struct Counters {
    std::uint64_t acquisitions[kLockClassCount];
    std::uint64_t nested;    // acquired while another class was already held
    std::uint64_t uncovered; // guarded access without holding its class
};

constexpr bool enabled() {
#ifdef RTRL_LOCK_AUDIT
    return true;
#else
    return false;
#endif
}

Counters snapshot();
void reset();

#ifdef RTRL_LOCK_AUDIT
void on_lock(LockClass c);
void on_unlock(LockClass c);
void require_held(LockClass c);
#else
inline void on_lock(LockClass) {}
inline void on_unlock(LockClass) {}
inline void require_held(LockClass) {}
#endif

}  // namespace lock_audit

template <LockClass C>
class ClassMutex {
public:
    static constexpr LockClass lock_class = C;

    void lock() {
        mu_.lock();
        lock_audit::on_lock(C);
    }
    bool try_lock() {
        if (!mu_.try_lock()) return false;
        lock_audit::on_lock(C);
        return true;
    }
    void unlock() {
        lock_audit::on_unlock(C);
        mu_.unlock();
    }
    std::mutex& native() { return mu_; }

private:
    std::mutex mu_;
};

using UpdateListMutex = ClassMutex<LockClass::UpdateList>;
using CurrentStateMutex = ClassMutex<LockClass::CurrentState>;
using PolicyMutex = ClassMutex<LockClass::Policy>;
using ModelMutex = ClassMutex<LockClass::Model>;

}  // namespace rtrl
