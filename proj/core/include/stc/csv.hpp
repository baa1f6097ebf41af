#pragma once

#include <iosfwd>

#include "stc/sim.hpp"

namespace stc {

/// Columns: t, j, ell, x0.., e0.., s0.., tau, tau_max, U1, U_chosen, chosen_p.
/// chosen_p is 1-based. Preceded by '#' comment lines on hybrid time.
void write_trace_csv(std::ostream& out, const SolutionTrace& trace);

/// Columns: k, t_k, kind, value, chosen_p, fallback. The initial condition
/// is the row k = 0.
void write_events_csv(std::ostream& out, const SolutionTrace& trace);

}  // namespace stc
