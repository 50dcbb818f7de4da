#ifndef QENT_SCHEDULE_HPP
#define QENT_SCHEDULE_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "qent/hamiltonians.hpp"

namespace qent {

/// Cavity resonant with the 0<->1 transition of one qutrit for g*t = angle.
struct CavityWindow {
  int qutrit = 1;
  double angle = 0.0;
  bool operator==(const CavityWindow&) const = default;
};

/// Rectangular drive on one transition, Omega*t = angle.
struct PulseSegment {
  int qutrit = 1;
  Transition transition = Transition::Lower;
  double phase = 0.0;
  double angle = 0.0;
  bool operator==(const PulseSegment&) const = default;
};

/// Level-spacing retune; no coherent dynamics, dissipation still acts.
struct RetuneIdle {
  double duration = 0.0;  // s
  bool operator==(const RetuneIdle&) const = default;
};

using Segment = std::variant<CavityWindow, PulseSegment, RetuneIdle>;

enum class ScheduleMode { Serial, Concurrent };

inline const char* to_string(ScheduleMode m) { return m == ScheduleMode::Serial ? "serial" : "concurrent"; }

struct ScheduleItem {
  Segment segment;
  int step = 0;             // protocol step 1..9
  bool concurrent = false;  // starts together with the previous item
  bool operator==(const ScheduleItem&) const = default;
};

struct Schedule {
  std::vector<ScheduleItem> items;
  ScheduleMode mode = ScheduleMode::Serial;
  std::string metadata;

  bool operator==(const Schedule&) const = default;
};

/// Angular frequencies (rad/s) and retune time (s) of a protocol run.
struct ProtocolParams {
  CouplingParams coupling{2 * pi * 100e6, 2 * pi * 100e6};
  double omega10 = 2 * pi * 100e6;
  double omega21 = 2 * pi * 100e6;
  double tau_d = 1.5e-9;

  double rabi(Transition t) const { return t == Transition::Lower ? omega10 : omega21; }

  void validate() const {
    if (!(coupling.g1 > 0 && coupling.g2 > 0 && omega10 > 0 && omega21 > 0))
      throw InputError("coupling constants and Rabi frequencies must be strictly positive");
    if (!(tau_d >= 0)) throw InputError("retune time must be non-negative");
  }
};

/// Steps 1-9 of the entangling sequence. Idles: one before every cavity
/// window, plus one after the windows of steps 4 and 8. In concurrent mode
/// the qutrit-1 pulses of steps 5 and 7 overlap the first qutrit-2 pulse and
/// the qutrit-2 cavity window respectively.
inline Schedule build_schedule(ScheduleMode mode = ScheduleMode::Serial, double tau_d = 1.5e-9) {
  using T = Transition;
  const bool par = mode == ScheduleMode::Concurrent;
  Schedule s;
  s.mode = mode;
  s.metadata = par ? "mode=concurrent; step 5 and 7 qutrit-1 pulses overlap their qutrit-2 partner"
                   : "mode=serial; step 5 qutrit-1 pulse precedes qutrit-2 pulses; step 7 cavity window precedes "
                     "qutrit-1 pulse";
  auto add = [&](int step, Segment seg, bool concurrent = false) { s.items.push_back({seg, step, concurrent}); };
  auto idle = [&](int step) { add(step, RetuneIdle{tau_d}); };

  add(1, PulseSegment{2, T::Lower, -pi / 2, pi / 4});
  add(1, PulseSegment{2, T::Upper, -pi / 2, pi / 2});

  idle(2);
  add(2, CavityWindow{1, pi / 2});

  idle(3);
  add(3, CavityWindow{2, pi});

  idle(4);
  add(4, CavityWindow{1, 3 * pi / 2});
  idle(4);

  add(5, PulseSegment{1, T::Upper, pi / 2, pi / 2});
  add(5, PulseSegment{2, T::Lower, -pi / 2, pi / 2}, par);
  add(5, PulseSegment{2, T::Upper, pi / 2, pi / 4});
  add(5, PulseSegment{2, T::Lower, pi / 2, 3 * pi / 4});
  add(5, PulseSegment{2, T::Upper, pi / 2, pi / 2});

  idle(6);
  add(6, CavityWindow{1, pi / 2});

  idle(7);
  add(7, CavityWindow{2, pi});
  add(7, PulseSegment{1, T::Upper, pi / 2, pi}, par);

  idle(8);
  add(8, CavityWindow{1, 3 * pi / 2});
  idle(8);

  add(9, PulseSegment{2, T::Upper, pi / 2, pi / 2});
  add(9, PulseSegment{2, T::Lower, pi / 2, pi / 4});
  return s;
}

inline int qutrit_of(const Segment& seg) {
  if (auto c = std::get_if<CavityWindow>(&seg)) return c->qutrit;
  if (auto p = std::get_if<PulseSegment>(&seg)) return p->qutrit;
  return 0;
}

struct ScheduleTotals {
  int cavity_windows = 0;
  int idles = 0;
  int pulses = 0;
  double lower_angle = 0.0;  // sum of Omega10 * t
  double upper_angle = 0.0;  // sum of Omega21 * t
  double cavity_angle_q1 = 0.0;
  double cavity_angle_q2 = 0.0;
  double idle_time = 0.0;
};

inline ScheduleTotals totals(const Schedule& s) {
  ScheduleTotals t;
  for (const auto& item : s.items) {
    std::visit(
        [&](const auto& seg) {
          using S = std::decay_t<decltype(seg)>;
          if constexpr (std::is_same_v<S, CavityWindow>) {
            ++t.cavity_windows;
            (seg.qutrit == 1 ? t.cavity_angle_q1 : t.cavity_angle_q2) += seg.angle;
          } else if constexpr (std::is_same_v<S, PulseSegment>) {
            ++t.pulses;
            (seg.transition == Transition::Lower ? t.lower_angle : t.upper_angle) += seg.angle;
          } else {
            ++t.idles;
            t.idle_time += seg.duration;
          }
        },
        item.segment);
  }
  return t;
}

/// Checks the structural invariants; throws InputError on violation.
inline void validate(const Schedule& s) {
  std::vector<std::pair<int, int>> windows;
  for (std::size_t i = 0; i < s.items.size(); ++i) {
    const auto& item = s.items[i];
    if (i == 0 && item.concurrent) throw InputError("schedule: first segment cannot be concurrent");
    std::visit(
        [&](const auto& seg) {
          using S = std::decay_t<decltype(seg)>;
          if constexpr (std::is_same_v<S, RetuneIdle>) {
            if (!(seg.duration >= 0)) throw InputError("schedule: negative idle duration");
            if (item.concurrent) throw InputError("schedule: idles cannot run concurrently");
          } else {
            if (!(seg.angle >= 0)) throw InputError("schedule: negative rotation angle");
            if (seg.qutrit != 1 && seg.qutrit != 2) throw InputError("schedule: qutrit must be 1 or 2");
          }
        },
        item.segment);
  }
  // Concurrent groups: disjoint supports, one cavity coupling at most.
  std::size_t start = 0;
  while (start < s.items.size()) {
    std::size_t end = start + 1;
    while (end < s.items.size() && s.items[end].concurrent) ++end;
    int cavities = 0;
    std::vector<int> qutrits;
    for (std::size_t i = start; i < end; ++i) {
      const auto& seg = s.items[i].segment;
      if (std::holds_alternative<CavityWindow>(seg)) ++cavities;
      const int q = qutrit_of(seg);
      if (q != 0) {
        if (std::find(qutrits.begin(), qutrits.end(), q) != qutrits.end())
          throw InputError("schedule: concurrent segments act on the same qutrit");
        qutrits.push_back(q);
      }
    }
    if (cavities > 1) throw InputError("schedule: two qutrits coupled to the cavity at once");
    start = end;
  }
}

namespace detail {
inline std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}
}  // namespace detail

/// One line per segment: `CAV q=.. angle=..`, `PUL q=.. tr=.. phi=.. angle=..`,
/// `IDL t=..`. Segments that start with the previous one carry ` concurrent`.
inline std::string to_text(const ScheduleItem& item) {
  using detail::fmt_num;
  std::string line = std::visit(
      [](const auto& seg) -> std::string {
        using S = std::decay_t<decltype(seg)>;
        if constexpr (std::is_same_v<S, CavityWindow>) {
          return "CAV q=" + std::to_string(seg.qutrit) + " angle=" + fmt_num(seg.angle);
        } else if constexpr (std::is_same_v<S, PulseSegment>) {
          return "PUL q=" + std::to_string(seg.qutrit) + " tr=" + to_string(seg.transition) +
                 " phi=" + fmt_num(seg.phase) + " angle=" + fmt_num(seg.angle);
        } else {
          return "IDL t=" + fmt_num(seg.duration);
        }
      },
      item.segment);
  if (item.concurrent) line += " concurrent";
  return line;
}

inline std::string to_text(const Schedule& s) {
  std::string out;
  for (const auto& item : s.items) out += to_text(item) + "\n";
  return out;
}

/// 64-bit FNV-1a, hex encoded.
inline std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string digest(const Schedule& s) { return fnv1a_hex(to_text(s)); }

inline ComplexMatrix segment_hamiltonian(const Segment& seg, const ProtocolParams& p, const SubsystemLayout& layout) {
  if (auto c = std::get_if<CavityWindow>(&seg)) {
    const auto q = qutrit(c->qutrit);
    return h_cavity(p.coupling.for_qutrit(q), q, layout);
  }
  if (auto pu = std::get_if<PulseSegment>(&seg)) {
    PulseParams pp{pu->transition, p.rabi(pu->transition), pu->phase, 0.0};
    return h_pulse(pp, qutrit(pu->qutrit), layout);
  }
  return ComplexMatrix(layout.total_dim(), layout.total_dim());
}

/// Angular frequency that sets the rotation rate of a segment (0 for idles).
inline double segment_frequency(const Segment& seg, const ProtocolParams& p) {
  if (auto c = std::get_if<CavityWindow>(&seg)) return p.coupling.for_qutrit(qutrit(c->qutrit));
  if (auto pu = std::get_if<PulseSegment>(&seg)) return p.rabi(pu->transition);
  return 0.0;
}

inline double segment_duration(const Segment& seg, const ProtocolParams& p) {
  if (auto idle = std::get_if<RetuneIdle>(&seg)) return idle->duration;
  const double f = segment_frequency(seg, p);
  const double angle = std::holds_alternative<CavityWindow>(seg) ? std::get<CavityWindow>(seg).angle
                                                                 : std::get<PulseSegment>(seg).angle;
  return angle / f;
}

/// Piece of the timeline with a constant Hamiltonian: the sum of the
/// Hamiltonians of the `active` items.
struct Interval {
  double duration = 0.0;
  std::vector<std::size_t> active;  // indices into Schedule::items
  int step = 0;
};

/// Splits the schedule into constant-Hamiltonian intervals. Serial schedules
/// give one interval per item.
inline std::vector<Interval> resolve_intervals(const Schedule& s, const ProtocolParams& p) {
  std::vector<Interval> out;
  std::size_t start = 0;
  while (start < s.items.size()) {
    std::size_t end = start + 1;
    while (end < s.items.size() && s.items[end].concurrent) ++end;
    std::vector<double> dur;
    for (std::size_t i = start; i < end; ++i) dur.push_back(segment_duration(s.items[i].segment, p));
    std::vector<double> cuts = dur;
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double t0 = 0.0;
    for (double t1 : cuts) {
      Interval iv{t1 - t0, {}, s.items[start].step};
      for (std::size_t i = start; i < end; ++i)
        if (dur[i - start] > t0) iv.active.push_back(i);
      if (iv.duration > 0.0 || (end - start == 1)) out.push_back(std::move(iv));
      t0 = t1;
    }
    start = end;
  }
  return out;
}

inline double schedule_duration(const Schedule& s, const ProtocolParams& p) {
  double t = 0.0;
  for (const auto& iv : resolve_intervals(s, p)) t += iv.duration;
  return t;
}

}  // namespace qent

#endif  // QENT_SCHEDULE_HPP
