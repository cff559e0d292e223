// elliptic.hpp — complete elliptic integrals via the arithmetic-geometric
// mean, the Grötzsch ring modulus, and the closed-form Greenian capacity of a
// symmetric segment in the unit disk. Serves as the independent conformal-
// modulus route against which the Nyström solver is cross-validated:
//
//   mod(D \ [0,s])   = mu(s)/(2 pi),  mu(s) = (pi/2) K(k')/K(k), k = s
//   mod(D \ [-r,r])  = mu(r^2)/(4 pi)      (square map halves the modulus)
//   cap_D([-r,r])    = 1/(2 pi mod) = 2/mu(r^2)
//
// checked against cap of a circle |z| = rho, which is 1/log(1/rho).

#pragma once

#include "common.hpp"

namespace merolab {

// K(k), modulus convention K(k) = int_0^{pi/2} (1 - k^2 sin^2 t)^{-1/2} dt
inline double elliptic_K(double k) {
    if (!(k >= 0.0 && k < 1.0)) throw domain_error("elliptic_K: k in [0,1) required");
    double a = 1.0, b = std::sqrt(1.0 - k * k);
    for (int i = 0; i < 64 && std::abs(a - b) > 1e-17 * a; ++i) {
        double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return 3.14159265358979323846 / (2.0 * a);
}

// Groetzsch modulus mu(s), decreasing from +inf at 0 to 0 at 1.
inline double groetzsch_mu(double s) {
    if (!(s > 0.0 && s < 1.0)) throw domain_error("groetzsch_mu: s in (0,1) required");
    double kp = std::sqrt(1.0 - s * s);
    return (3.14159265358979323846 / 2.0) * elliptic_K(kp) / elliptic_K(s);
}

// Greenian capacity of [-r, r] relative to the unit disk.
inline double segment_capacity_oracle(double r) {
    if (!(r > 0.0 && r < 1.0)) throw domain_error("segment_capacity_oracle: r in (0,1)");
    return 2.0 / groetzsch_mu(r * r);
}

}  // namespace merolab
