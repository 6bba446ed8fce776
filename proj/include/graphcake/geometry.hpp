#pragma once

#include <cmath>
#include <vector>

namespace graphcake {

// Absolute tolerance for comparing offsets and lengths. Inputs are short
// decimal literals at desk scale, so 1e-9 separates intent from noise.
inline constexpr double kGeomTol = 1e-9;

inline bool approx_eq(double a, double b) { return std::fabs(a - b) <= kGeomTol; }
inline bool approx_lt(double a, double b) { return a < b - kGeomTol; }
inline bool approx_le(double a, double b) { return a <= b + kGeomTol; }

// Sub-interval of a single axis with per-end open/closed flags.
// A degenerate interval (lo == hi) is a single point and must be closed
// at both ends.
struct Flagged {
  double lo = 0.0;
  double hi = 0.0;
  bool closed_lo = true;
  bool closed_hi = true;
};

bool flagged_valid(const Flagged& f);
bool flagged_is_point(const Flagged& f);
bool flagged_contains(const Flagged& f, double t);

// True iff the two intervals share at least one point.
bool flagged_overlap(const Flagged& a, const Flagged& b);

// True iff every point of `inner` lies in `outer`.
bool flagged_covers(const Flagged& outer, const Flagged& inner);

// Canonical union: sorted, pairwise disjoint, intervals meeting at a point
// merged only when at least one side is closed there.
std::vector<Flagged> flagged_union(std::vector<Flagged> parts);

// Set difference base \ cuts, canonicalized. Cut endpoints complement their
// flags in the remainder (removing a closed end leaves an open end and vice
// versa). Degenerate leftovers survive as single points.
std::vector<Flagged> flagged_subtract(std::vector<Flagged> base,
                                      const std::vector<Flagged>& cuts);

// Intersection of two canonical lists.
std::vector<Flagged> flagged_intersect(const std::vector<Flagged>& a,
                                       const std::vector<Flagged>& b);

}  // namespace graphcake
