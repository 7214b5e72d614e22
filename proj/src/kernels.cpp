#include "uktr/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace uktr::kernels {

#ifndef UKTR_HAVE_AVX2
const Table* avx2_table() { return nullptr; }
#endif

const Table& active() {
    static const Table* chosen = [] {
        if (const char* env = std::getenv("UKTR_KERNELS")) {
            if (std::strcmp(env, "scalar") == 0) return &scalar_table();
        }
#if defined(__x86_64__) && defined(UKTR_HAVE_AVX2)
        if (avx2_table() != nullptr && __builtin_cpu_supports("avx2")) return avx2_table();
#endif
        return &scalar_table();
    }();
    return *chosen;
}

} // namespace uktr::kernels
