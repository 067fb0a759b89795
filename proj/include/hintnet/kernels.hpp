#pragma once

#include <string>
#include <vector>

namespace hintnet::kernels {

// Dense double-precision kernels over row-major buffers. Two lanes ship:
// a scalar reference lane and an AVX2+FMA lane; the active lane is picked
// at startup from CPUID and can be overridden with the HINTNET_KERNELS
// environment variable ("scalar" | "avx2") or set_active().
//
// Elementwise ops are bit-identical across lanes. Reductions (dot, gemm,
// sum) may differ by rounding because the vector lane reassociates the
// accumulation; equivalence tests bound the difference.
struct Kernels {
    const char* name;

    // c[m x n] = a[m x k] * b[k x n]; accumulates into c when acc is set
    void (*gemm)(const double* a, const double* b, double* c, int m, int k, int n,
                 bool acc);
    // c[k x n] += a[m x k]^T * b[m x n]
    void (*gemm_tn_acc)(const double* a, const double* b, double* c, int m, int k,
                        int n);
    // c[m x k] = a[m x n] * b[k x n]^T; accumulates when acc is set
    void (*gemm_nt)(const double* a, const double* b, double* c, int m, int n, int k,
                    bool acc);
    // y[m] = W[m x n] * x[n]; accumulates when acc is set
    void (*gemv)(const double* w, const double* x, double* y, int m, int n, bool acc);
    // x[n] += W[m x n]^T * y[m]
    void (*gemv_t_acc)(const double* w, const double* y, double* x, int m, int n);
    // W[m x n] += y[m] * x[n]^T  (rank-1 update)
    void (*ger_acc)(const double* y, const double* x, double* w, int m, int n);

    void (*add)(const double* x, const double* y, double* out, int n);
    void (*sub)(const double* x, const double* y, double* out, int n);
    void (*mul)(const double* x, const double* y, double* out, int n);
    void (*mul_acc)(const double* x, const double* y, double* out, int n);
    void (*axpy)(double a, const double* x, double* y, int n);
    void (*scale)(double a, double* x, int n);
    void (*relu)(const double* x, double* y, int n);
    // dx[i] = pre[i] > 0 ? dy[i] : 0
    void (*relu_mask)(const double* pre, const double* dy, double* dx, int n);

    double (*dot)(const double* x, const double* y, int n);
    double (*sum)(const double* x, int n);
    double (*sumsq_diff)(const double* x, const double* y, int n);
};

const Kernels& scalar();
bool avx2_available();
const Kernels* lane_by_name(const std::string& name);  // nullptr if unknown/unavailable
std::vector<const Kernels*> available_lanes();

const Kernels& active();
void set_active(const Kernels& k);  // test hook / CLI override

}  // namespace hintnet::kernels
