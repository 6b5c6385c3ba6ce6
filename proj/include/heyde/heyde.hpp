#pragma once

// Umbrella header: exact harmonic analysis of probability distributions on
// finite Abelian groups, centered on conditional-symmetry verdicts for
// pairs of linear forms and the classification of their conclusions.

#include "heyde/counterexamples.hpp"
#include "heyde/distribution.hpp"
#include "heyde/finite_difference.hpp"
#include "heyde/group.hpp"
#include "heyde/json_io.hpp"
#include "heyde/linear_forms.hpp"
#include "heyde/oracle.hpp"
#include "heyde/rational.hpp"
#include "heyde/reduction.hpp"
#include "heyde/reports.hpp"
#include "heyde/symmetry.hpp"
#include "heyde/tolerances.hpp"
