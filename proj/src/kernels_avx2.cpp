// AVX2+FMA lane. This translation unit is compiled with -mavx2 -mfma; the
// dispatcher only hands out this lane when CPUID reports both features.

#include "hintnet/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace hintnet::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

void v_gemm(const double* a, const double* b, double* c, int m, int k, int n,
            bool acc) {
    const int n8 = n & ~7;
    const int n4 = n & ~3;
    for (int i = 0; i < m; ++i) {
        const double* ai = a + static_cast<long>(i) * k;
        double* ci = c + static_cast<long>(i) * n;
        int j = 0;
        for (; j < n8; j += 8) {
            __m256d acc0 = acc ? _mm256_loadu_pd(ci + j) : _mm256_setzero_pd();
            __m256d acc1 = acc ? _mm256_loadu_pd(ci + j + 4) : _mm256_setzero_pd();
            for (int l = 0; l < k; ++l) {
                const __m256d av = _mm256_set1_pd(ai[l]);
                const double* bl = b + static_cast<long>(l) * n + j;
                acc0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(bl), acc0);
                acc1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(bl + 4), acc1);
            }
            _mm256_storeu_pd(ci + j, acc0);
            _mm256_storeu_pd(ci + j + 4, acc1);
        }
        for (; j < n4; j += 4) {
            __m256d acc0 = acc ? _mm256_loadu_pd(ci + j) : _mm256_setzero_pd();
            for (int l = 0; l < k; ++l) {
                const __m256d av = _mm256_set1_pd(ai[l]);
                acc0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b + static_cast<long>(l) * n + j),
                                       acc0);
            }
            _mm256_storeu_pd(ci + j, acc0);
        }
        for (; j < n; ++j) {
            double s = acc ? ci[j] : 0.0;
            for (int l = 0; l < k; ++l) s += ai[l] * b[static_cast<long>(l) * n + j];
            ci[j] = s;
        }
    }
}

void v_gemm_tn_acc(const double* a, const double* b, double* c, int m, int k,
                   int n) {
    const int n4 = n & ~3;
    for (int i = 0; i < m; ++i) {
        const double* ai = a + static_cast<long>(i) * k;
        const double* bi = b + static_cast<long>(i) * n;
        for (int l = 0; l < k; ++l) {
            const __m256d av = _mm256_set1_pd(ai[l]);
            double* cl = c + static_cast<long>(l) * n;
            int j = 0;
            for (; j < n4; j += 4) {
                __m256d cv = _mm256_loadu_pd(cl + j);
                cv = _mm256_fmadd_pd(av, _mm256_loadu_pd(bi + j), cv);
                _mm256_storeu_pd(cl + j, cv);
            }
            for (; j < n; ++j) cl[j] += ai[l] * bi[j];
        }
    }
}

inline double dot_avx(const double* x, const double* y, int n) {
    const int n8 = n & ~7;
    __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
    int i = 0;
    for (; i < n8; i += 8) {
        s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
        s1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), s1);
    }
    double s = hsum(_mm256_add_pd(s0, s1));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void v_gemm_nt(const double* a, const double* b, double* c, int m, int n, int k,
               bool acc) {
    for (int i = 0; i < m; ++i) {
        const double* ai = a + static_cast<long>(i) * n;
        for (int j = 0; j < k; ++j) {
            const double s = dot_avx(ai, b + static_cast<long>(j) * n, n);
            if (acc)
                c[static_cast<long>(i) * k + j] += s;
            else
                c[static_cast<long>(i) * k + j] = s;
        }
    }
}

void v_gemv(const double* w, const double* x, double* y, int m, int n, bool acc) {
    for (int i = 0; i < m; ++i) {
        const double s = dot_avx(w + static_cast<long>(i) * n, x, n);
        if (acc)
            y[i] += s;
        else
            y[i] = s;
    }
}

void v_gemv_t_acc(const double* w, const double* y, double* x, int m, int n) {
    const int n4 = n & ~3;
    for (int i = 0; i < m; ++i) {
        const __m256d yv = _mm256_set1_pd(y[i]);
        const double* wi = w + static_cast<long>(i) * n;
        int j = 0;
        for (; j < n4; j += 4) {
            __m256d xv = _mm256_loadu_pd(x + j);
            xv = _mm256_fmadd_pd(yv, _mm256_loadu_pd(wi + j), xv);
            _mm256_storeu_pd(x + j, xv);
        }
        for (; j < n; ++j) x[j] += y[i] * wi[j];
    }
}

void v_ger_acc(const double* y, const double* x, double* w, int m, int n) {
    const int n4 = n & ~3;
    for (int i = 0; i < m; ++i) {
        const __m256d yv = _mm256_set1_pd(y[i]);
        double* wi = w + static_cast<long>(i) * n;
        int j = 0;
        for (; j < n4; j += 4) {
            __m256d wv = _mm256_loadu_pd(wi + j);
            wv = _mm256_fmadd_pd(yv, _mm256_loadu_pd(x + j), wv);
            _mm256_storeu_pd(wi + j, wv);
        }
        for (; j < n; ++j) wi[j] += y[i] * x[j];
    }
}

void v_add(const double* x, const double* y, double* out, int n) {
    const int n4 = n & ~3;
    int i = 0;
    for (; i < n4; i += 4)
        _mm256_storeu_pd(out + i,
                         _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) out[i] = x[i] + y[i];
}
void v_sub(const double* x, const double* y, double* out, int n) {
    const int n4 = n & ~3;
    int i = 0;
    for (; i < n4; i += 4)
        _mm256_storeu_pd(out + i,
                         _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) out[i] = x[i] - y[i];
}
void v_mul(const double* x, const double* y, double* out, int n) {
    const int n4 = n & ~3;
    int i = 0;
    for (; i < n4; i += 4)
        _mm256_storeu_pd(out + i,
                         _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) out[i] = x[i] * y[i];
}
void v_mul_acc(const double* x, const double* y, double* out, int n) {
    const int n4 = n & ~3;
    int i = 0;
    for (; i < n4; i += 4) {
        __m256d ov = _mm256_loadu_pd(out + i);
        ov = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), ov);
        _mm256_storeu_pd(out + i, ov);
    }
    for (; i < n; ++i) out[i] += x[i] * y[i];
}
void v_axpy(double a, const double* x, double* y, int n) {
    const __m256d av = _mm256_set1_pd(a);
    const int n4 = n & ~3;
    int i = 0;
    for (; i < n4; i += 4) {
        __m256d yv = _mm256_loadu_pd(y + i);
        yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yv);
        _mm256_storeu_pd(y + i, yv);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}
void v_scale(double a, double* x, int n) {
    const __m256d av = _mm256_set1_pd(a);
    const int n4 = n & ~3;
    int i = 0;
    for (; i < n4; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= a;
}
void v_relu(const double* x, double* y, int n) {
    const __m256d z = _mm256_setzero_pd();
    const int n4 = n & ~3;
    int i = 0;
    for (; i < n4; i += 4)
        _mm256_storeu_pd(y + i, _mm256_max_pd(z, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}
void v_relu_mask(const double* pre, const double* dy, double* dx, int n) {
    const __m256d z = _mm256_setzero_pd();
    const int n4 = n & ~3;
    int i = 0;
    for (; i < n4; i += 4) {
        const __m256d m = _mm256_cmp_pd(_mm256_loadu_pd(pre + i), z, _CMP_GT_OQ);
        _mm256_storeu_pd(dx + i, _mm256_and_pd(m, _mm256_loadu_pd(dy + i)));
    }
    for (; i < n; ++i) dx[i] = pre[i] > 0.0 ? dy[i] : 0.0;
}

double v_dot(const double* x, const double* y, int n) { return dot_avx(x, y, n); }

double v_sum(const double* x, int n) {
    const int n4 = n & ~3;
    __m256d s = _mm256_setzero_pd();
    int i = 0;
    for (; i < n4; i += 4) s = _mm256_add_pd(s, _mm256_loadu_pd(x + i));
    double r = hsum(s);
    for (; i < n; ++i) r += x[i];
    return r;
}

double v_sumsq_diff(const double* x, const double* y, int n) {
    const int n4 = n & ~3;
    __m256d s = _mm256_setzero_pd();
    int i = 0;
    for (; i < n4; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        s = _mm256_fmadd_pd(d, d, s);
    }
    double r = hsum(s);
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        r += d * d;
    }
    return r;
}

const Kernels kAvx2 = {
    "avx2",    v_gemm, v_gemm_tn_acc, v_gemm_nt, v_gemv,    v_gemv_t_acc,
    v_ger_acc, v_add,  v_sub,         v_mul,     v_mul_acc, v_axpy,
    v_scale,   v_relu, v_relu_mask,   v_dot,     v_sum,     v_sumsq_diff,
};

}  // namespace

const Kernels* avx2_lane() { return &kAvx2; }

}  // namespace hintnet::kernels

#else

namespace hintnet::kernels {
const Kernels* avx2_lane() { return nullptr; }
}  // namespace hintnet::kernels

#endif
