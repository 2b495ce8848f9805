#pragma once

#include "homsurf/grid.hpp"

namespace homsurf {

// Central-difference Wirtinger derivatives, z = s + i t:
//   d_z    = (d/ds - i d/dt) / 2
//   d_zbar = (d/ds + i d/dt) / 2
// The outermost usable ring of the input is consumed; the result's border
// grows by one and the fresh ring is filled with quiet NaN.
ComplexField d_z(const RealField& f);
ComplexField d_z(const ComplexField& f);
ComplexField d_zbar(const RealField& f);
ComplexField d_zbar(const ComplexField& f);

// Plain central differences along each axis, same border bookkeeping.
ComplexField d_s(const ComplexField& f);
ComplexField d_t(const ComplexField& f);
RealField d_s(const RealField& f);
RealField d_t(const RealField& f);

// Max and root-mean-square of |value| over the counted nodes (boundary rings
// excluded per the field's border).
Norm residual_norm(const RealField& f);
Norm residual_norm(const ComplexField& f);

}  // namespace homsurf
