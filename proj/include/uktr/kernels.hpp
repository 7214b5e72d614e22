#pragma once

#include <cstdint>

// Data-parallel inner loops shared by the surrogate and the set-geometry code:
// batched weighted squared distances, radial-function evaluation and dot
// reductions over the interpolation centers. A scalar reference table and an
// AVX2+FMA table implement the same contract; active() picks one at runtime.

namespace uktr::kernels {

enum class Rbf : int { cubic = 0, thin_plate, linear_decay, multiquadratic, gaussian };

struct RbfParams {
    Rbf kind = Rbf::gaussian;
    double shape = 1.0;  // gamma in the radial formulas that carry one
    double expo = 2.0;   // gaussian exponent
};

// Radial values are produced against squared distances r2 to avoid redundant
// square roots. d1 additionally yields w = phi'(r)/r and d2 yields
// c = (phi''(r) - w)/r^2, the two factors the model gradient and Hessian
// assemble from. One-sided limits at r = 0 are documented in the scalar
// implementation and are identical in every table.
struct Table {
    const char* name;
    // out[k] = sum_j w[j] * (x[j] - pts[j*q + k])^2, pts coordinate-major
    void (*wsqdist)(const double* x, const double* pts, const double* w, int n, int q,
                    double* out);
    void (*rbf_d0)(const RbfParams& p, const double* r2, int q, double* phi);
    void (*rbf_d1)(const RbfParams& p, const double* r2, int q, double* phi, double* w);
    void (*rbf_d2)(const RbfParams& p, const double* r2, int q, double* phi, double* w,
                   double* c);
    double (*dot)(const double* a, const double* b, int q);
    double (*wdot)(const double* w, const double* a, const double* b, int q);
    double (*sum)(const double* a, int q);
    void (*sqrt_vec)(const double* a, int q, double* out);
};

const Table& scalar_table();
const Table* avx2_table();  // nullptr when not compiled in
// Runtime choice: AVX2 when the CPU has it, unless UKTR_KERNELS=scalar.
const Table& active();

} // namespace uktr::kernels
