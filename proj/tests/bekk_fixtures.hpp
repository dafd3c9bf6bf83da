#pragma once

#include "volspill/bekk.hpp"

// Reference BEKK parameter sets. Comma initializers are row-major:
// A << a11, A(0,1), A(1,0), a22, where A(1,0) loads the U.S. shock on the Brazil variance.
namespace fixtures {

/// Sorriso/CME corn, post-2010 regime.
inline volspill::BekkParams sorriso_post() {
    volspill::BekkParams p;
    p.mu << -0.0004, -0.0004;
    p.c11 = 0.0061;
    p.c21 = -0.0001;
    p.c22 = 0.0013;
    p.A << 0.1865, -0.0558, 0.0694, 0.2409;
    p.B << 0.9487, 0.0102, -0.0041, 0.9677;
    return p;
}

/// Paranagua/CME corn, post-2010 regime. Large Brazil-to-U.S. loadings.
inline volspill::BekkParams paranagua_post() {
    volspill::BekkParams p;
    p.mu << -0.0001, -0.0002;
    p.c11 = 0.0027;
    p.c21 = 0.0097;
    p.c22 = 0.0003;
    p.A << 0.1878, -0.4899, -0.0269, 0.3664;
    p.B << 0.9683, 0.1213, -0.0016, 0.4500;
    return p;
}

/// Sorriso/CME corn, pre-2010 regime. Near-diagonal.
inline volspill::BekkParams sorriso_pre() {
    volspill::BekkParams p;
    p.c11 = 0.0039;
    p.c21 = -0.0010;
    p.c22 = 0.0022;
    p.A << 0.2928, 0.0045, 0.0111, 0.1865;
    p.B << 0.9471, -0.0009, 0.0111, 0.9764;
    return p;
}

} // namespace fixtures
