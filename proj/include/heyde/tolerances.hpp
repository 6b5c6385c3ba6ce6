#pragma once

namespace heyde {

// Two-tier tolerance ladder. Constructions and exact algebra are held to
// kAlgebraTol; classification predicates and equation sweeps, whose inputs
// may have passed through logs and products, use kClassifyTol. Comparisons
// of probability laws in total variation use kTvTol, and Fourier inversion
// accepts negative masses down to kMassRecoveryTol before rejecting.
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kClassifyTol = 1e-9;
inline constexpr double kEquationTol = 1e-9;
inline constexpr double kTvTol = 1e-10;
inline constexpr double kMassRecoveryTol = 1e-10;
inline constexpr double kReductionResidualTol = 1e-8;

}  // namespace heyde
