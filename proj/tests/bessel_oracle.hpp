#pragma once

#include <cmath>

// Independent Bessel J_n oracle via Miller's downward recurrence with the
// J_0 + 2 sum J_{2k} = 1 normalization. Test-side only; deliberately not part
// of the library so the lattice-kernel identities are checked against a
// separate computation path.
inline double bessel_J_oracle(int n, double z) {
    if (n < 0) {
        double v = bessel_J_oracle(-n, z);
        return (-n) % 2 ? -v : v;
    }
    if (z == 0.0) return n == 0 ? 1.0 : 0.0;
    if (z < 0.0) {
        double v = bessel_J_oracle(n, -z);
        return n % 2 ? -v : v;
    }

    int M = n + static_cast<int>(std::max(z, 20.0)) + 50 +
            static_cast<int>(12.0 * std::sqrt(std::max(1.0, z)));
    if (M % 2) ++M;

    double jp = 0.0;      // J_{k+1}
    double jc = 1e-290;   // J_k seed
    double norm = 0.0;
    double result = (n == M) ? jc : 0.0;
    for (int k = M; k >= 1; --k) {
        double jm = (2.0 * k / z) * jc - jp;  // J_{k-1}
        jp = jc;
        jc = jm;
        int idx = k - 1;
        if (idx == n) result = jc;
        if (idx == 0)
            norm += jc;
        else if (idx % 2 == 0)
            norm += 2.0 * jc;
        if (std::abs(jc) > 1e260) {
            jp *= 1e-260;
            jc *= 1e-260;
            norm *= 1e-260;
            result *= 1e-260;
        }
    }
    return result / norm;
}
