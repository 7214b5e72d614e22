#include "uktr/kernels.hpp"

#include <cmath>
#include <immintrin.h>

// AVX2+FMA lane. Grouped 4-wide with scalar tails delegated to the reference
// table so the guard semantics stay identical. Kinds whose evaluation is
// dominated by transcendentals we did not vectorize (thin plate, linear decay,
// generic-exponent gaussian) run the reference implementation from this table
// too; the dispatch contract only promises agreement, not speed, for those.

namespace uktr::kernels {
namespace {

constexpr double kTinyR2 = 1e-30;

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// exp(x) for x <= 0, rational approximation with two-part argument reduction.
inline __m256d exp_neg_pd(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
    const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
    const __m256d half = _mm256_set1_pd(0.5);

    __m256d underflow = _mm256_cmp_pd(x, _mm256_set1_pd(-708.0), _CMP_LT_OQ);
    x = _mm256_max_pd(x, _mm256_set1_pd(-708.0));

    __m256d nd = _mm256_floor_pd(_mm256_fmadd_pd(log2e, x, half));
    x = _mm256_fnmadd_pd(nd, c1, x);
    x = _mm256_fnmadd_pd(nd, c2, x);
    __m256d xx = _mm256_mul_pd(x, x);

    __m256d px = _mm256_set1_pd(1.26177193074810590878e-4);
    px = _mm256_fmadd_pd(px, xx, _mm256_set1_pd(3.02994407707441961300e-2));
    px = _mm256_fmadd_pd(px, xx, _mm256_set1_pd(9.99999999999999999910e-1));
    px = _mm256_mul_pd(px, x);

    __m256d qx = _mm256_set1_pd(3.00198505138664455042e-6);
    qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.52448340349684104192e-3));
    qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.27265548208155028766e-1));
    qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.00000000000000000005e0));

    __m256d r = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
    r = _mm256_fmadd_pd(_mm256_set1_pd(2.0), r, _mm256_set1_pd(1.0));

    __m128i ni = _mm256_cvtpd_epi32(nd);
    __m256i nl = _mm256_cvtepi32_epi64(ni);
    nl = _mm256_slli_epi64(_mm256_add_epi64(nl, _mm256_set1_epi64x(1023)), 52);
    r = _mm256_mul_pd(r, _mm256_castsi256_pd(nl));
    return _mm256_andnot_pd(underflow, r);
}

void wsqdist_avx2(const double* x, const double* pts, const double* w, int n, int q,
                  double* out) {
    int k = 0;
    for (; k + 4 <= q; k += 4) _mm256_storeu_pd(out + k, _mm256_setzero_pd());
    for (; k < q; ++k) out[k] = 0.0;
    for (int j = 0; j < n; ++j) {
        const __m256d xj = _mm256_set1_pd(x[j]);
        const __m256d wj = _mm256_set1_pd(w[j]);
        const double* row = pts + static_cast<size_t>(j) * q;
        for (k = 0; k + 4 <= q; k += 4) {
            __m256d d = _mm256_sub_pd(xj, _mm256_loadu_pd(row + k));
            __m256d acc = _mm256_loadu_pd(out + k);
            acc = _mm256_fmadd_pd(_mm256_mul_pd(wj, d), d, acc);
            _mm256_storeu_pd(out + k, acc);
        }
        for (; k < q; ++k) {
            const double d = x[j] - row[k];
            out[k] += w[j] * d * d;
        }
    }
}

// Vector bodies for the sqrt/exp kinds; one lane-width at a time.
inline void cubic4(const double* r2, double* phi, double* w, double* c) {
    __m256d v = _mm256_loadu_pd(r2);
    __m256d r = _mm256_sqrt_pd(v);
    if (phi) _mm256_storeu_pd(phi, _mm256_mul_pd(v, r));
    if (w) _mm256_storeu_pd(w, _mm256_mul_pd(_mm256_set1_pd(3.0), r));
    if (c) {
        __m256d tiny = _mm256_cmp_pd(v, _mm256_set1_pd(kTinyR2), _CMP_LT_OQ);
        __m256d cv = _mm256_div_pd(_mm256_set1_pd(3.0), r);
        _mm256_storeu_pd(c, _mm256_andnot_pd(tiny, cv));
    }
}

inline void multiquadratic4(double g, const double* r2, double* phi, double* w, double* c) {
    __m256d v = _mm256_sqrt_pd(_mm256_add_pd(_mm256_loadu_pd(r2), _mm256_set1_pd(g * g)));
    if (phi) _mm256_storeu_pd(phi, v);
    __m256d iv = _mm256_div_pd(_mm256_set1_pd(1.0), v);
    if (w) _mm256_storeu_pd(w, iv);
    if (c) {
        __m256d c3 = _mm256_mul_pd(iv, _mm256_mul_pd(iv, iv));
        _mm256_storeu_pd(c, _mm256_sub_pd(_mm256_setzero_pd(), c3));
    }
}

inline void gaussian4(double g, const double* r2, double* phi, double* w, double* c) {
    __m256d t = _mm256_mul_pd(_mm256_set1_pd(g), _mm256_loadu_pd(r2));
    __m256d cut = _mm256_cmp_pd(t, _mm256_set1_pd(708.0), _CMP_GT_OQ);
    __m256d e = _mm256_andnot_pd(cut, exp_neg_pd(_mm256_sub_pd(_mm256_setzero_pd(), t)));
    if (phi) _mm256_storeu_pd(phi, e);
    if (w) _mm256_storeu_pd(w, _mm256_mul_pd(_mm256_set1_pd(-2.0 * g), e));
    if (c) _mm256_storeu_pd(c, _mm256_mul_pd(_mm256_set1_pd(4.0 * g * g), e));
}

bool vector_kind(const RbfParams& p) {
    return p.kind == Rbf::cubic || p.kind == Rbf::multiquadratic ||
           (p.kind == Rbf::gaussian && p.expo == 2.0);
}

void rbf_dn_avx2(const RbfParams& p, const double* r2, int q, double* phi, double* w,
                 double* c) {
    if (!vector_kind(p)) {
        if (c)
            scalar_table().rbf_d2(p, r2, q, phi, w, c);
        else if (w)
            scalar_table().rbf_d1(p, r2, q, phi, w);
        else
            scalar_table().rbf_d0(p, r2, q, phi);
        return;
    }
    int k = 0;
    for (; k + 4 <= q; k += 4) {
        double* pk = phi ? phi + k : nullptr;
        double* wk = w ? w + k : nullptr;
        double* ck = c ? c + k : nullptr;
        switch (p.kind) {
            case Rbf::cubic: cubic4(r2 + k, pk, wk, ck); break;
            case Rbf::multiquadratic: multiquadratic4(p.shape, r2 + k, pk, wk, ck); break;
            default: gaussian4(p.shape, r2 + k, pk, wk, ck); break;
        }
    }
    if (k < q) {
        if (c)
            scalar_table().rbf_d2(p, r2 + k, q - k, phi + k, w + k, c + k);
        else if (w)
            scalar_table().rbf_d1(p, r2 + k, q - k, phi + k, w + k);
        else
            scalar_table().rbf_d0(p, r2 + k, q - k, phi + k);
    }
}

void rbf_d0_avx2(const RbfParams& p, const double* r2, int q, double* phi) {
    rbf_dn_avx2(p, r2, q, phi, nullptr, nullptr);
}

void rbf_d1_avx2(const RbfParams& p, const double* r2, int q, double* phi, double* w) {
    rbf_dn_avx2(p, r2, q, phi, w, nullptr);
}

void rbf_d2_avx2(const RbfParams& p, const double* r2, int q, double* phi, double* w,
                 double* c) {
    rbf_dn_avx2(p, r2, q, phi, w, c);
}

double dot_avx2(const double* a, const double* b, int q) {
    __m256d acc = _mm256_setzero_pd();
    int k = 0;
    for (; k + 4 <= q; k += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc);
    double s = hsum(acc);
    for (; k < q; ++k) s += a[k] * b[k];
    return s;
}

double wdot_avx2(const double* w, const double* a, const double* b, int q) {
    __m256d acc = _mm256_setzero_pd();
    int k = 0;
    for (; k + 4 <= q; k += 4) {
        __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + k), ab, acc);
    }
    double s = hsum(acc);
    for (; k < q; ++k) s += w[k] * a[k] * b[k];
    return s;
}

double sum_avx2(const double* a, int q) {
    __m256d acc = _mm256_setzero_pd();
    int k = 0;
    for (; k + 4 <= q; k += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + k));
    double s = hsum(acc);
    for (; k < q; ++k) s += a[k];
    return s;
}

void sqrt_avx2(const double* a, int q, double* out) {
    int k = 0;
    for (; k + 4 <= q; k += 4) _mm256_storeu_pd(out + k, _mm256_sqrt_pd(_mm256_loadu_pd(a + k)));
    for (; k < q; ++k) out[k] = std::sqrt(a[k]);
}

} // namespace

const Table* avx2_table() {
    static const Table t{"avx2",      wsqdist_avx2, rbf_d0_avx2, rbf_d1_avx2, rbf_d2_avx2,
                         dot_avx2,    wdot_avx2,    sum_avx2,    sqrt_avx2};
    return &t;
}

} // namespace uktr::kernels
