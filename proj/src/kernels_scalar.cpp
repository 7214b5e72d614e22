#include "uktr/kernels.hpp"

#include <cmath>

// Reference lane. Every other table must agree with this one up to the
// usual reassociation noise of vector reductions.

namespace uktr::kernels {
namespace {

constexpr double kTinyR2 = 1e-30;

void wsqdist_scalar(const double* x, const double* pts, const double* w, int n, int q,
                    double* out) {
    for (int k = 0; k < q; ++k) out[k] = 0.0;
    for (int j = 0; j < n; ++j) {
        const double xj = x[j];
        const double wj = w[j];
        const double* row = pts + static_cast<size_t>(j) * q;
        for (int k = 0; k < q; ++k) {
            const double d = xj - row[k];
            out[k] += wj * d * d;
        }
    }
}

// Radial catalogue. phi(r), w = phi'/r, c = (phi'' - w)/r^2 as functions of r2:
//   cubic          phi = r^3              w = 3r            c = 3/r
//   thin plate     phi = r^2 log r        w = log r2 + 1    c = 2/r2
//   linear decay   phi = max(0, 1-g r)    w = -g/r          c = g/r^3
//   multiquadratic phi = sqrt(r2 + g^2)   w = 1/phi         c = -1/phi^3
//   gaussian       phi = exp(-g r^b)      w = -a phi        c = a(a r2 - b + 2) phi / r2
//                  with a = g b r^(b-2); for b = 2 this is w = -2g phi, c = 4g^2 phi.
// At r = 0 the one-sided values w = 0, c = 0 are used for the kinds whose
// radial derivative has no finite limit there (thin plate, linear decay) and
// for the 0/0 forms (cubic c, gaussian generic c).

void radial(const RbfParams& p, double r2, double* phi, double* w, double* c) {
    switch (p.kind) {
        case Rbf::cubic: {
            const double r = std::sqrt(r2);
            if (phi) *phi = r2 * r;
            if (w) *w = 3.0 * r;
            if (c) *c = r2 < kTinyR2 ? 0.0 : 3.0 / r;
            break;
        }
        case Rbf::thin_plate: {
            if (r2 < kTinyR2) {
                if (phi) *phi = 0.0;
                if (w) *w = 0.0;
                if (c) *c = 0.0;
            } else {
                const double l = std::log(r2);
                if (phi) *phi = 0.5 * r2 * l;
                if (w) *w = l + 1.0;
                if (c) *c = 2.0 / r2;
            }
            break;
        }
        case Rbf::linear_decay: {
            const double g = p.shape;
            const double r = std::sqrt(r2);
            if (g * r >= 1.0) {
                if (phi) *phi = 0.0;
                if (w) *w = 0.0;
                if (c) *c = 0.0;
            } else if (r2 < kTinyR2) {
                if (phi) *phi = 1.0;
                if (w) *w = 0.0;
                if (c) *c = 0.0;
            } else {
                if (phi) *phi = 1.0 - g * r;
                if (w) *w = -g / r;
                if (c) *c = g / (r2 * r);
            }
            break;
        }
        case Rbf::multiquadratic: {
            const double v = std::sqrt(r2 + p.shape * p.shape);
            if (phi) *phi = v;
            if (w) *w = 1.0 / v;
            if (c) *c = -1.0 / (v * v * v);
            break;
        }
        case Rbf::gaussian: {
            const double g = p.shape;
            if (p.expo == 2.0) {
                const double t = g * r2;
                const double e = t > 708.0 ? 0.0 : std::exp(-t);
                if (phi) *phi = e;
                if (w) *w = -2.0 * g * e;
                if (c) *c = 4.0 * g * g * e;
            } else {
                const double b = p.expo;
                const double t = g * std::pow(r2, 0.5 * b);
                const double e = t > 708.0 ? 0.0 : std::exp(-t);
                if (phi) *phi = e;
                if (r2 < kTinyR2) {
                    if (w) *w = 0.0;
                    if (c) *c = 0.0;
                } else {
                    const double a = g * b * std::pow(r2, 0.5 * b - 1.0);
                    if (w) *w = -a * e;
                    if (c) *c = a * (a * r2 - b + 2.0) * e / r2;
                }
            }
            break;
        }
    }
}

void rbf_d0_scalar(const RbfParams& p, const double* r2, int q, double* phi) {
    for (int k = 0; k < q; ++k) radial(p, r2[k], phi + k, nullptr, nullptr);
}

void rbf_d1_scalar(const RbfParams& p, const double* r2, int q, double* phi, double* w) {
    for (int k = 0; k < q; ++k) radial(p, r2[k], phi + k, w + k, nullptr);
}

void rbf_d2_scalar(const RbfParams& p, const double* r2, int q, double* phi, double* w,
                   double* c) {
    for (int k = 0; k < q; ++k) radial(p, r2[k], phi + k, w + k, c + k);
}

double dot_scalar(const double* a, const double* b, int q) {
    double s = 0.0;
    for (int k = 0; k < q; ++k) s += a[k] * b[k];
    return s;
}

double wdot_scalar(const double* w, const double* a, const double* b, int q) {
    double s = 0.0;
    for (int k = 0; k < q; ++k) s += w[k] * a[k] * b[k];
    return s;
}

double sum_scalar(const double* a, int q) {
    double s = 0.0;
    for (int k = 0; k < q; ++k) s += a[k];
    return s;
}

void sqrt_scalar(const double* a, int q, double* out) {
    for (int k = 0; k < q; ++k) out[k] = std::sqrt(a[k]);
}

} // namespace

const Table& scalar_table() {
    static const Table t{"scalar",       wsqdist_scalar, rbf_d0_scalar, rbf_d1_scalar,
                         rbf_d2_scalar,  dot_scalar,     wdot_scalar,   sum_scalar,
                         sqrt_scalar};
    return t;
}

} // namespace uktr::kernels
