#include "cshv/problem.hpp"

#include "cshv/errors.hpp"

namespace cshv {

Problem make_problem(int N, const TorusGrid& grid, const VortexSet& vortices, double lambda,
                     const BackgroundOptions& bg_opt) {
  if (vortices.components() != N)
    throw std::invalid_argument("make_problem: vortex set must have N components");
  if (!(lambda > 0)) throw std::invalid_argument("make_problem: lambda must be positive");
  if (N < 3 || N > 5)
    warn("rank N = " + std::to_string(N) +
         " is outside 3..5, where the compactness property behind the two-solution "
         "statement is established; results may be unreliable");

  Problem p{make_cartan_data(N, vortices.counts(), grid.area()), grid, vortices, {}, lambda};
  p.backgrounds.reserve(N);
  for (int j = 0; j < N; ++j) p.backgrounds.push_back(background_function(grid, vortices, j, bg_opt));
  return p;
}

FieldState zero_state(const Problem& p) {
  FieldState st;
  st.c.assign(p.N(), 0.0);
  st.w.assign(p.N(), ScalarField(p.grid));
  return st;
}

}  // namespace cshv
