#include "hintnet/kernels.hpp"

// Reference lane. Plain loops, one accumulation order per output element;
// the vector lanes are checked against these.

namespace hintnet::kernels {
namespace {

void s_gemm(const double* a, const double* b, double* c, int m, int k, int n,
            bool acc) {
    for (int i = 0; i < m; ++i) {
        double* ci = c + static_cast<long>(i) * n;
        if (!acc)
            for (int j = 0; j < n; ++j) ci[j] = 0.0;
        const double* ai = a + static_cast<long>(i) * k;
        for (int l = 0; l < k; ++l) {
            const double ail = ai[l];
            const double* bl = b + static_cast<long>(l) * n;
            for (int j = 0; j < n; ++j) ci[j] += ail * bl[j];
        }
    }
}

void s_gemm_tn_acc(const double* a, const double* b, double* c, int m, int k,
                   int n) {
    for (int i = 0; i < m; ++i) {
        const double* ai = a + static_cast<long>(i) * k;
        const double* bi = b + static_cast<long>(i) * n;
        for (int l = 0; l < k; ++l) {
            const double ail = ai[l];
            double* cl = c + static_cast<long>(l) * n;
            for (int j = 0; j < n; ++j) cl[j] += ail * bi[j];
        }
    }
}

void s_gemm_nt(const double* a, const double* b, double* c, int m, int n, int k,
               bool acc) {
    for (int i = 0; i < m; ++i) {
        const double* ai = a + static_cast<long>(i) * n;
        for (int j = 0; j < k; ++j) {
            const double* bj = b + static_cast<long>(j) * n;
            double s = 0.0;
            for (int l = 0; l < n; ++l) s += ai[l] * bj[l];
            if (acc)
                c[static_cast<long>(i) * k + j] += s;
            else
                c[static_cast<long>(i) * k + j] = s;
        }
    }
}

void s_gemv(const double* w, const double* x, double* y, int m, int n, bool acc) {
    for (int i = 0; i < m; ++i) {
        const double* wi = w + static_cast<long>(i) * n;
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += wi[j] * x[j];
        if (acc)
            y[i] += s;
        else
            y[i] = s;
    }
}

void s_gemv_t_acc(const double* w, const double* y, double* x, int m, int n) {
    for (int i = 0; i < m; ++i) {
        const double yi = y[i];
        const double* wi = w + static_cast<long>(i) * n;
        for (int j = 0; j < n; ++j) x[j] += yi * wi[j];
    }
}

void s_ger_acc(const double* y, const double* x, double* w, int m, int n) {
    for (int i = 0; i < m; ++i) {
        const double yi = y[i];
        double* wi = w + static_cast<long>(i) * n;
        for (int j = 0; j < n; ++j) wi[j] += yi * x[j];
    }
}

void s_add(const double* x, const double* y, double* out, int n) {
    for (int i = 0; i < n; ++i) out[i] = x[i] + y[i];
}
void s_sub(const double* x, const double* y, double* out, int n) {
    for (int i = 0; i < n; ++i) out[i] = x[i] - y[i];
}
void s_mul(const double* x, const double* y, double* out, int n) {
    for (int i = 0; i < n; ++i) out[i] = x[i] * y[i];
}
void s_mul_acc(const double* x, const double* y, double* out, int n) {
    for (int i = 0; i < n; ++i) out[i] += x[i] * y[i];
}
void s_axpy(double a, const double* x, double* y, int n) {
    for (int i = 0; i < n; ++i) y[i] += a * x[i];
}
void s_scale(double a, double* x, int n) {
    for (int i = 0; i < n; ++i) x[i] *= a;
}
void s_relu(const double* x, double* y, int n) {
    for (int i = 0; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}
void s_relu_mask(const double* pre, const double* dy, double* dx, int n) {
    for (int i = 0; i < n; ++i) dx[i] = pre[i] > 0.0 ? dy[i] : 0.0;
}

double s_dot(const double* x, const double* y, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}
double s_sum(const double* x, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += x[i];
    return s;
}
double s_sumsq_diff(const double* x, const double* y, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

const Kernels kScalar = {
    "scalar",    s_gemm, s_gemm_tn_acc, s_gemm_nt, s_gemv,      s_gemv_t_acc,
    s_ger_acc,   s_add,  s_sub,         s_mul,     s_mul_acc,   s_axpy,
    s_scale,     s_relu, s_relu_mask,   s_dot,     s_sum,       s_sumsq_diff,
};

}  // namespace

const Kernels& scalar() { return kScalar; }

}  // namespace hintnet::kernels
