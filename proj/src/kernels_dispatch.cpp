#include "hintnet/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace hintnet::kernels {

const Kernels* avx2_lane();  // defined in kernels_avx2.cpp, null off-x86

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
    return avx2_lane() != nullptr && __builtin_cpu_supports("avx2") &&
           __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Kernels* lane_by_name(const std::string& name) {
    if (name == "scalar") return &scalar();
    if (name == "avx2" && avx2_available()) return avx2_lane();
    return nullptr;
}

std::vector<const Kernels*> available_lanes() {
    std::vector<const Kernels*> lanes{&scalar()};
    if (avx2_available()) lanes.push_back(avx2_lane());
    return lanes;
}

namespace {

const Kernels* pick_default() {
    if (const char* env = std::getenv("HINTNET_KERNELS")) {
        if (const Kernels* k = lane_by_name(env)) return k;
    }
    return avx2_available() ? avx2_lane() : &scalar();
}

const Kernels* g_active = pick_default();

}  // namespace

const Kernels& active() { return *g_active; }
void set_active(const Kernels& k) { g_active = &k; }

}  // namespace hintnet::kernels
