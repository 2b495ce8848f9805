#pragma once

#include <string>
#include <vector>

#include "homsurf/calculus.hpp"
#include "homsurf/grid.hpp"
#include "homsurf/space.hpp"

namespace homsurf {

/// The five surface fields over one conformal grid:
///   lambda  conformal factor of the induced metric, positive
///   u       normal component of the vertical field, in [-1, 1]
///   H       mean curvature
///   p       Hopf coefficient (second fundamental form, (2,0) part)
///   A       vertical-tangential coefficient <xi, psi_z>
/// The algebraic constraint 4|A|^2/lambda = 1 - u^2 ties them together; a
/// field violating it beyond tol_alg is not valid fundamental data.
struct FundamentalField {
  SpaceParams space;
  ConformalGrid grid;
  RealField lambda;
  RealField u;
  RealField H;
  ComplexField p;
  ComplexField A;
};

FundamentalField make_fundamental_field(const SpaceParams& space, const ConformalGrid& grid);

// Collects human-readable violations; empty means valid. tol_alg bounds the
// algebraic constraint; pass +inf to skip it (diagnostic paths that want a
// report instead of a rejection).
std::vector<std::string> validate_fundamental(const FundamentalField& data,
                                              double tol_alg = 1e-8);

// Mirror t -> -t together with the sign flips that keep the integrability
// system satisfied: u -> -u, H -> -H, p -> -conj(p), A -> conj(A).
FundamentalField flip_orientation(const FundamentalField& data);

// Residuals of the first-order integrability system; zero on data that come
// from an actual surface. C4 is algebraic (border 0), C0..C3 carry one
// derivative (border + 1), the Gauss residual carries two.
ComplexField residual_C0(const FundamentalField& data);
ComplexField residual_C1(const FundamentalField& data);
ComplexField residual_C2(const FundamentalField& data);
ComplexField residual_C3(const FundamentalField& data);
RealField residual_C4(const FundamentalField& data);
ComplexField gauss_residual(const FundamentalField& data);

struct DerivedQuantities {
  RealField K;           // intrinsic curvature, -2 (log lambda)_{z zbar} / lambda
  ComplexField T_coeff;  // tangential part of the vertical field, 2 conj(A) / lambda
  RealField detS;        // shape operator determinant, H^2 - 4|p|^2/lambda^2
};
DerivedQuantities derived_quantities(const FundamentalField& data);

/// Residual tolerances. Derivative residuals scale with the square of the
/// grid step and with M, the largest field magnitude (floored at 1).
struct ToleranceProfile {
  double algebraic = 1e-8;
  double first_order_factor = 10.0;
  double second_order_factor = 100.0;

  double first_order(double h, double M) const { return first_order_factor * h * h * M; }
  double second_order(double h, double M) const { return second_order_factor * h * h * M; }
};

double field_magnitude_scale(const FundamentalField& data);  // the M above

struct ResidualEntry {
  std::string name;
  Norm norm;
  double tolerance = 0.0;
  bool pass = false;
};

struct ResidualReport {
  std::vector<ResidualEntry> entries;
  double h = 0.0;
  double M = 0.0;
  bool pass = false;

  const ResidualEntry* find(const std::string& name) const;
};

ResidualReport check_all(const FundamentalField& data, const ToleranceProfile& tol = {});

}  // namespace homsurf
