#include "stc/csv.hpp"

#include <cstdio>
#include <ostream>
#include <string>

namespace stc {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_event(std::ostream& out, const Event& ev) {
  out << ev.k << ',' << num(ev.t) << ','
      << (ev.kind == EventKind::sample ? "sample" : "update") << ',' << num(ev.value)
      << ',';
  if (ev.kind == EventKind::sample) out << ev.chosen + 1;
  out << ',' << (ev.kind == EventKind::sample ? (ev.fallback ? "1" : "0") : "") << '\n';
}

}  // namespace

void write_trace_csv(std::ostream& out, const SolutionTrace& trace) {
  out << "# hybrid time (t, j): j counts jumps from 0; the initial update is the jump "
         "j = 0 -> 1\n"
      << "# event k happens at t_k as the jump j = k-1 -> k: post-jump point (t_k, k), "
         "pre-jump point (t_k, k-1)\n";
  const std::size_t n = trace.state_dim;
  out << "t,j,ell";
  for (const char* part : {"x", "e", "s"}) {
    for (std::size_t i = 0; i < n; ++i) out << ',' << part << i;
  }
  out << ",tau,tau_max,U1,U_chosen,chosen_p\n";
  for (std::size_t r = 0; r < trace.samples.size(); ++r) {
    const auto& s = trace.samples[r];
    out << num(s.time.t) << ',' << s.time.j << ',' << s.ell;
    for (auto part : {trace.x(r), trace.e(r), trace.s(r)}) {
      for (double v : part) out << ',' << num(v);
    }
    out << ',' << num(s.tau) << ',' << num(s.tau_max) << ',' << num(s.u1) << ','
        << num(s.u_chosen) << ',' << s.chosen + 1 << '\n';
  }
}

void write_events_csv(std::ostream& out, const SolutionTrace& trace) {
  out << "k,t_k,kind,value,chosen_p,fallback\n";
  write_event(out, trace.initial);
  for (const auto& ev : trace.events) write_event(out, ev);
}

}  // namespace stc
