#include "plcc/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace plcc::kernels {

#ifndef PLCC_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif

namespace {

const KernelTable* resolve() {
    const char* env = std::getenv("PLCC_KERNELS");
    const std::string_view want = env ? std::string_view(env) : std::string_view();
    if (want == "scalar") return &scalar_table();
    if (const KernelTable* t = avx2_table()) return t;
    return &scalar_table();
}

std::atomic<const KernelTable*>& slot() {
    static std::atomic<const KernelTable*> table{resolve()};
    return table;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

bool select(std::string_view name) {
    if (name == "scalar") {
        slot().store(&scalar_table(), std::memory_order_release);
        return true;
    }
    if (name == "avx2") {
        if (const KernelTable* t = avx2_table()) {
            slot().store(t, std::memory_order_release);
            return true;
        }
    }
    return false;
}

}  // namespace plcc::kernels
