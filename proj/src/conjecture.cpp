#include "restart/conjecture.hpp"

#include <cmath>

#include "restart/error.hpp"
#include "restart/numeric.hpp"

namespace restart {

InvarianceResidual lfold_invariance_residual(const Distribution& law, int l, std::span<const double> t_grid) {
  if (l < 1) throw Error(ErrorCode::InvalidParameter, "branching factor must be at least 1");
  InvarianceResidual out;
  out.l = l;
  out.t.assign(t_grid.begin(), t_grid.end());
  out.residual.resize(t_grid.size());
  out.candidate = law.atoms().empty() && law.tail(0.0) == 1.0;
  const double ld = static_cast<double>(l);

  parallel_for(t_grid.size(), [&](std::size_t i) {
    const double t = t_grid[i];
    if (!(t > 0.0)) {
      out.residual[i] = 0.0;
      return;
    }
    std::vector<double> breaks;
    for (double b : law.breakpoints()) {
      if (b > 0.0 && b < t) breaks.insert(breaks.end(), {b, t - b});
    }
    const auto f = [&](double u) { return std::exp(ld * law.log_tail(u) + law.log_tail(t - u)); };
    const double conv = integrate(f, 0.0, t, breaks, 1e-13).value;
    out.residual[i] = conv - t * law.tail(t);
  });

  for (std::size_t i = 0; i < out.t.size(); ++i) {
    if (std::abs(out.residual[i]) > out.sup_norm) {
      out.sup_norm = std::abs(out.residual[i]);
      out.argsup = out.t[i];
    }
  }
  return out;
}

}  // namespace restart
