#include "graphcake/geometry.hpp"

#include <algorithm>

namespace graphcake {

bool flagged_valid(const Flagged& f) {
  if (approx_lt(f.lo, f.hi)) return true;
  return approx_eq(f.lo, f.hi) && f.closed_lo && f.closed_hi;
}

bool flagged_is_point(const Flagged& f) { return approx_eq(f.lo, f.hi); }

bool flagged_contains(const Flagged& f, double t) {
  if (t < f.lo - kGeomTol || t > f.hi + kGeomTol) return false;
  if (flagged_is_point(f)) return f.closed_lo && f.closed_hi;
  if (approx_eq(t, f.lo)) return f.closed_lo;
  if (approx_eq(t, f.hi)) return f.closed_hi;
  return true;
}

bool flagged_overlap(const Flagged& a, const Flagged& b) {
  const double lo = std::max(a.lo, b.lo);
  const double hi = std::min(a.hi, b.hi);
  if (approx_lt(lo, hi)) return true;
  if (!approx_eq(lo, hi)) return false;
  return flagged_contains(a, lo) && flagged_contains(b, lo);
}

bool flagged_covers(const Flagged& outer, const Flagged& inner) {
  if (!flagged_contains(outer, inner.lo) && inner.closed_lo) return false;
  if (!flagged_contains(outer, inner.hi) && inner.closed_hi) return false;
  if (inner.lo < outer.lo - kGeomTol || inner.hi > outer.hi + kGeomTol) return false;
  // Interior containment: inner's span must sit inside outer's span, and at
  // a shared open end of outer the inner end must be open too.
  if (approx_eq(inner.lo, outer.lo) && inner.closed_lo && !outer.closed_lo) return false;
  if (approx_eq(inner.hi, outer.hi) && inner.closed_hi && !outer.closed_hi) return false;
  return true;
}

std::vector<Flagged> flagged_union(std::vector<Flagged> parts) {
  std::erase_if(parts, [](const Flagged& f) { return !flagged_valid(f); });
  std::sort(parts.begin(), parts.end(), [](const Flagged& a, const Flagged& b) {
    if (!approx_eq(a.lo, b.lo)) return a.lo < b.lo;
    if (a.closed_lo != b.closed_lo) return a.closed_lo;
    return a.hi < b.hi;
  });
  std::vector<Flagged> out;
  for (const Flagged& f : parts) {
    if (!out.empty()) {
      Flagged& cur = out.back();
      const bool touches = approx_lt(f.lo, cur.hi) ||
                           (approx_eq(f.lo, cur.hi) && (cur.closed_hi || f.closed_lo));
      if (touches) {
        if (approx_eq(f.lo, cur.lo)) cur.closed_lo = cur.closed_lo || f.closed_lo;
        if (approx_eq(f.hi, cur.hi)) {
          cur.closed_hi = cur.closed_hi || f.closed_hi;
        } else if (f.hi > cur.hi) {
          cur.hi = f.hi;
          cur.closed_hi = f.closed_hi;
        }
        continue;
      }
    }
    out.push_back(f);
  }
  return out;
}

namespace {

// base \ cut for a single pair; appends 0..2 leftovers.
void subtract_one(const Flagged& base, const Flagged& cut, std::vector<Flagged>& out) {
  if (!flagged_overlap(base, cut)) {
    out.push_back(base);
    return;
  }
  // Left remainder: points of base strictly before the cut begins.
  if (approx_lt(base.lo, cut.lo)) {
    out.push_back(Flagged{base.lo, cut.lo, base.closed_lo, !cut.closed_lo});
  } else if (approx_eq(base.lo, cut.lo) && base.closed_lo && !cut.closed_lo) {
    out.push_back(Flagged{base.lo, base.lo, true, true});
  }
  // Right remainder.
  if (approx_lt(cut.hi, base.hi)) {
    out.push_back(Flagged{cut.hi, base.hi, !cut.closed_hi, base.closed_hi});
  } else if (approx_eq(cut.hi, base.hi) && base.closed_hi && !cut.closed_hi) {
    out.push_back(Flagged{base.hi, base.hi, true, true});
  }
}

}  // namespace

std::vector<Flagged> flagged_subtract(std::vector<Flagged> base,
                                      const std::vector<Flagged>& cuts) {
  for (const Flagged& cut : cuts) {
    if (!flagged_valid(cut)) continue;
    std::vector<Flagged> next;
    for (const Flagged& b : base) subtract_one(b, cut, next);
    base = std::move(next);
  }
  std::erase_if(base, [](const Flagged& f) { return !flagged_valid(f); });
  return flagged_union(std::move(base));
}

std::vector<Flagged> flagged_intersect(const std::vector<Flagged>& a,
                                       const std::vector<Flagged>& b) {
  std::vector<Flagged> out;
  for (const Flagged& x : a) {
    for (const Flagged& y : b) {
      if (!flagged_overlap(x, y)) continue;
      Flagged f;
      if (approx_eq(x.lo, y.lo)) {
        f.lo = std::max(x.lo, y.lo);
        f.closed_lo = x.closed_lo && y.closed_lo;
      } else if (x.lo > y.lo) {
        f.lo = x.lo;
        f.closed_lo = x.closed_lo;
      } else {
        f.lo = y.lo;
        f.closed_lo = y.closed_lo;
      }
      if (approx_eq(x.hi, y.hi)) {
        f.hi = std::min(x.hi, y.hi);
        f.closed_hi = x.closed_hi && y.closed_hi;
      } else if (x.hi < y.hi) {
        f.hi = x.hi;
        f.closed_hi = x.closed_hi;
      } else {
        f.hi = y.hi;
        f.closed_hi = y.closed_hi;
      }
      if (flagged_valid(f)) out.push_back(f);
    }
  }
  return flagged_union(std::move(out));
}

}  // namespace graphcake
