#pragma once

#include <vector>

#include "cshv/cartan.hpp"
#include "cshv/torus.hpp"

namespace cshv {

/// Immutable description of one solve: exact coupling data, grid, vortex
/// placement, per-component background functions, and the coupling strength.
struct Problem {
  CartanData cartan;
  TorusGrid grid;
  VortexSet vortices;
  std::vector<Background> backgrounds;
  double lambda = 0;

  int N() const { return cartan.N; }
};

/// Unknown v = c + w split into component means c_j and mean-zero fields w_j
/// (0-based component indexing).
struct FieldState {
  std::vector<double> c;
  std::vector<ScalarField> w;
};

Problem make_problem(int N, const TorusGrid& grid, const VortexSet& vortices, double lambda,
                     const BackgroundOptions& bg_opt = {});

/// Zero state (c = 0, w = 0) for a given problem.
FieldState zero_state(const Problem& p);

}  // namespace cshv
