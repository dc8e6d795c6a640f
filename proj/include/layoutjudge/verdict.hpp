#pragma once

namespace layoutjudge {

/// Outcome of comparing layouts a and b. t < 0 prefers a; t == 0 is reported
/// as b with zero confidence.
struct Verdict {
  double t = 0.0;
  bool prefers_a = false;
  bool zero_confidence = true;
};

inline Verdict verdict_from(double t) { return {t, t < 0.0, t == 0.0}; }

}  // namespace layoutjudge
