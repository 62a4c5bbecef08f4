"""Piecewise derivators: the nondecreasing, left-continuous drivers of the calculus.

A derivator is stored exactly as a chain of affine/flat segments plus an explicit
list of atoms (jump points with their gaps).  Measures of intervals, jumps and
constancy intervals are then exact queries on the structure, no quadrature
involved.  Convention at a breakpoint shared by two segments: the value comes
from the left segment, which is what left-continuity demands.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvariantError, SchemaError

# Relative tolerance used when validating that declared atoms match the
# segment-boundary mismatches.  The representation is meant to be exact, the
# tolerance only absorbs float noise in hand-written inputs.
_GAP_RTOL = 1e-12


@dataclass(frozen=True)
class Segment:
    """One piece of a derivator: affine (slope >= 0) or flat."""

    lo: float
    hi: float
    kind: str  # "affine" | "flat"
    slope: float = 0.0
    intercept: float = 0.0  # absolute: value(t) = slope * t + intercept

    def value(self, t):
        return self.slope * t + self.intercept

    @staticmethod
    def affine(lo, hi, slope, intercept):
        if slope == 0.0:
            return Segment(lo, hi, "flat", 0.0, intercept)
        return Segment(lo, hi, "affine", slope, intercept)

    @staticmethod
    def flat(lo, hi, level):
        return Segment(lo, hi, "flat", 0.0, level)


class Derivator:
    """Nondecreasing, left-continuous driver on a closed interval.

    segments: contiguous Segment chain covering [lo, hi].
    atoms: list of (t, gap) with gap > 0, each sitting on an internal
        segment boundary.  g(t+) - g(t) = gap there.
    """

    def __init__(self, segments, atoms=()):
        segments = tuple(
            Segment.affine(s.lo, s.hi, s.slope, s.intercept) if s.kind == "affine" else s
            for s in segments
        )
        atoms = tuple((float(t), float(gap)) for t, gap in atoms)
        self._validate(segments, atoms)
        self.segments = segments
        self.atoms = tuple(sorted(atoms))
        self.lo = segments[0].lo
        self.hi = segments[-1].hi

        # lookup tables
        self._bk = np.array([s.lo for s in segments[1:]])  # internal breakpoints
        self._bk_list = [s.lo for s in segments[1:]]
        self._slope = np.array([s.slope for s in segments])
        self._icept = np.array([s.intercept for s in segments])
        self._atom_t = [t for t, _ in self.atoms]
        self._atom_gap = {t: gap for t, gap in self.atoms}
        self._runs = self._constancy_runs(segments, set(self._atom_t))

    # -- construction ------------------------------------------------------

    @staticmethod
    def _validate(segments, atoms):
        if not segments:
            raise InvariantError("derivator needs at least one segment")
        for s in segments:
            if not (s.hi > s.lo):
                raise InvariantError(f"segment [{s.lo}, {s.hi}] has nonpositive length")
            if s.kind == "affine" and s.slope < 0:
                raise InvariantError(f"segment at [{s.lo}, {s.hi}] has negative slope")
            if s.kind not in ("affine", "flat"):
                raise InvariantError(f"unknown segment kind {s.kind!r}")
        for a, b in zip(segments, segments[1:]):
            if a.hi != b.lo:
                raise InvariantError(
                    f"segments not contiguous: [{a.lo}, {a.hi}] then [{b.lo}, {b.hi}]"
                )
        atom_map = {}
        for t, gap in atoms:
            if gap <= 0:
                raise InvariantError(f"atom at t={t} has nonpositive gap {gap}")
            if t in atom_map:
                raise InvariantError(f"duplicate atom at t={t}")
            atom_map[t] = gap
        internal = {b.lo for a, b in zip(segments, segments[1:])}
        for t in atom_map:
            if t not in internal:
                raise InvariantError(f"atom at t={t} is not on a segment boundary")
        for a, b in zip(segments, segments[1:]):
            left = a.value(a.hi)
            right = b.value(b.lo)
            declared = atom_map.get(b.lo, 0.0)
            scale = 1.0 + abs(left) + abs(right)
            if right - left < -_GAP_RTOL * scale:
                raise InvariantError(
                    f"monotonicity violated at breakpoint t={b.lo}: "
                    f"left value {left}, right value {right}"
                )
            if abs((right - left) - declared) > _GAP_RTOL * scale:
                raise InvariantError(
                    f"atom mismatch at t={b.lo}: boundary jump {right - left}, "
                    f"declared gap {declared}"
                )

    @classmethod
    def from_pieces(cls, pieces):
        """Build from ('affine', lo, hi, slope, intercept) / ('flat', lo, hi, level)
        tuples; atoms are inferred from the boundary mismatches."""
        segs = []
        for p in pieces:
            if p[0] == "affine":
                segs.append(Segment.affine(*p[1:]))
            elif p[0] == "flat":
                segs.append(Segment.flat(*p[1:]))
            else:
                raise InvariantError(f"unknown piece kind {p[0]!r}")
        atoms = []
        for a, b in zip(segs, segs[1:]):
            gap = b.value(b.lo) - a.value(a.hi)
            scale = 1.0 + abs(a.value(a.hi)) + abs(b.value(b.lo))
            if gap > _GAP_RTOL * scale:
                atoms.append((b.lo, gap))
        return cls(segs, atoms)

    @staticmethod
    def _constancy_runs(segments, atom_set):
        """Maximal open intervals (a, b) on which g is locally constant.

        A run is a chain of flat segments not interrupted by an atom.
        """
        runs = []
        i = 0
        while i < len(segments):
            if segments[i].kind != "flat":
                i += 1
                continue
            a = segments[i].lo
            j = i
            while (
                j + 1 < len(segments)
                and segments[j + 1].kind == "flat"
                and segments[j + 1].lo not in atom_set
            ):
                j += 1
            runs.append((a, segments[j].hi))
            i = j + 1
        return tuple(runs)

    # -- basic queries -----------------------------------------------------

    def _check_domain(self, t):
        fuzz = 1e-9 * (1.0 + abs(self.lo) + abs(self.hi))
        if t < self.lo - fuzz or t > self.hi + fuzz:
            raise DomainError(f"t={t} outside derivator domain [{self.lo}, {self.hi}]")
        return min(max(t, self.lo), self.hi)

    def _seg_index(self, t):
        # value at an internal breakpoint comes from the left segment
        return bisect.bisect_left(self._bk_list, t)

    def __call__(self, t):
        return self.eval(t)

    def eval(self, t):
        t = self._check_domain(float(t))
        i = self._seg_index(t)
        return float(self._slope[i] * t + self._icept[i])

    def eval_array(self, ts):
        ts = np.asarray(ts, dtype=float)
        fuzz = 1e-9 * (1.0 + abs(self.lo) + abs(self.hi))
        if np.any(ts < self.lo - fuzz) or np.any(ts > self.hi + fuzz):
            raise DomainError("point outside derivator domain")
        tc = np.clip(ts, self.lo, self.hi)
        idx = np.searchsorted(self._bk, tc, side="left")
        return self._slope[idx] * tc + self._icept[idx]

    def jump(self, t):
        """g(t+) - g(t); zero off the atom set."""
        t = float(t)
        return self._atom_gap.get(t, 0.0)

    def right_limit(self, t):
        t = float(t)
        if t >= self.hi:
            raise DomainError(f"right limit at t={t} needs points beyond {self.hi}")
        return self.eval(t) + self.jump(t)

    def is_atom(self, t):
        return float(t) in self._atom_gap

    def atoms_in(self, a, b):
        """Atoms (t, gap) with a <= t < b."""
        i = bisect.bisect_left(self._atom_t, a)
        j = bisect.bisect_left(self._atom_t, b)
        return self.atoms[i:j]

    def measure(self, a, b):
        """mu_g([a, b)) = g(b) - g(a), exact.  Requires a <= b."""
        if b < a:
            raise DomainError(f"measure needs a <= b, got [{a}, {b})")
        return self.eval(b) - self.eval(a)

    def continuous_measure(self, a, b):
        """Measure of [a, b) with the atom masses removed."""
        m = self.measure(a, b)
        for _, gap in self.atoms_in(a, b):
            m -= gap
        return max(m, 0.0)

    def constancy_run(self, t):
        """The open interval (a, b) of the constancy set containing t, or None."""
        t = float(t)
        for a, b in self._runs:
            if a < t < b:
                return (a, b)
        return None

    @property
    def constancy_runs(self):
        return self._runs

    def t_star(self, t):
        """t itself off the constancy set, else the right endpoint of its run."""
        run = self.constancy_run(t)
        return t if run is None else run[1]

    # -- stepping helpers (used by the numeric differentiator) --------------

    def next_atom(self, t):
        i = bisect.bisect_right(self._atom_t, t)
        return self._atom_t[i] if i < len(self._atom_t) else None

    def prev_atom(self, t):
        i = bisect.bisect_left(self._atom_t, t)
        return self._atom_t[i - 1] if i > 0 else None

    def advance_to_value(self, y):
        """Largest s with g(s) == y, or None when y is not attained.

        Flat stretches at level y resolve to their right end, matching the
        t* convention for where the calculus continues.  Values inside a jump
        gap are not attained.
        """
        tol = 1e-12 * (1.0 + abs(y))
        for s in reversed(self.segments):
            vlo, vhi = s.value(s.lo), s.value(s.hi)
            if y > vhi + tol:
                return None  # y sits in a jump gap (or above the range)
            if y >= vlo - tol:
                if s.kind == "flat":
                    return s.hi
                hit = min(max((y - s.intercept) / s.slope, s.lo), s.hi)
                if hit <= s.lo and s.lo in self._atom_gap:
                    # the segment's lower value is only a right limit there
                    return None
                return hit
        return None

    # -- structure-level checks ---------------------------------------------

    def check_translation_condition(self, L, sample_pairs=None, tol=1e-12):
        """Sampled check of g(x + L) - g(y + L) == g(x) - g(y).

        Returns (ok, max_deviation).  Samples default to all breakpoints and
        atoms plus a uniform grid, restricted to points shiftable by L.
        """
        if L <= 0 or self.hi - self.lo <= L:
            raise DomainError("shift L must fit inside the domain")
        if sample_pairs is None:
            pts = {self.lo, self.hi - L}
            for s in self.segments:
                for t in (s.lo, s.hi):
                    if self.lo <= t <= self.hi - L:
                        pts.add(t)
                    if self.lo <= t - L / 2 <= self.hi - L:
                        pts.add(t - L / 2)
            pts.update(np.linspace(self.lo, self.hi - L, 101))
            pts = sorted(pts)
            x0 = pts[0]
            sample_pairs = [(x, x0) for x in pts]
        dev = 0.0
        for x, y in sample_pairs:
            d = (self.eval(x + L) - self.eval(y + L)) - (self.eval(x) - self.eval(y))
            dev = max(dev, abs(d))
        return dev <= tol, dev

    # -- serialization -------------------------------------------------------

    def to_json(self):
        segs = []
        for s in self.segments:
            if s.kind == "affine":
                segs.append(
                    {"from": s.lo, "to": s.hi, "kind": "affine",
                     "slope": s.slope, "intercept": s.intercept}
                )
            else:
                segs.append(
                    {"from": s.lo, "to": s.hi, "kind": "flat", "level": s.intercept}
                )
        return {
            "domain": [self.lo, self.hi],
            "segments": segs,
            "atoms": [{"t": t, "gap": gap} for t, gap in self.atoms],
        }

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            try:
                obj = json.loads(obj)
            except json.JSONDecodeError as e:
                raise SchemaError(f"invalid JSON: {e}") from e
        if not isinstance(obj, dict):
            raise SchemaError("derivator description must be an object")
        try:
            raw_segs = obj["segments"]
        except KeyError:
            raise SchemaError("derivator description missing 'segments'")
        if not isinstance(raw_segs, list) or not raw_segs:
            raise SchemaError("'segments' must be a nonempty list")
        segs = []
        for i, rs in enumerate(raw_segs):
            try:
                lo, hi, kind = float(rs["from"]), float(rs["to"]), rs["kind"]
                if kind == "affine":
                    segs.append(Segment.affine(lo, hi, float(rs["slope"]),
                                               float(rs["intercept"])))
                elif kind == "flat":
                    segs.append(Segment.flat(lo, hi, float(rs["level"])))
                else:
                    raise SchemaError(f"segment {i}: unknown kind {kind!r}")
            except (KeyError, TypeError, ValueError) as e:
                if isinstance(e, SchemaError):
                    raise
                raise SchemaError(f"segment {i} malformed: {e}") from e
        atoms = []
        for i, ra in enumerate(obj.get("atoms", [])):
            try:
                atoms.append((float(ra["t"]), float(ra["gap"])))
            except (KeyError, TypeError, ValueError) as e:
                raise SchemaError(f"atom {i} malformed: {e}") from e
        d = cls(segs, atoms)
        dom = obj.get("domain")
        if dom is not None:
            if (
                not isinstance(dom, (list, tuple)) or len(dom) != 2
                or not all(isinstance(v, (int, float)) for v in dom)
            ):
                raise SchemaError("'domain' must be [lo, hi]")
            if not (math.isclose(dom[0], d.lo) and math.isclose(dom[1], d.hi)):
                raise SchemaError(
                    f"'domain' {dom} does not match segment cover [{d.lo}, {d.hi}]"
                )
        return d

    # -- misc ---------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Derivator)
            and self.segments == other.segments
            and self.atoms == other.atoms
        )

    def __hash__(self):
        return hash((self.segments, self.atoms))

    def __repr__(self):
        return (
            f"Derivator([{self.lo}, {self.hi}], {len(self.segments)} segments, "
            f"{len(self.atoms)} atoms)"
        )


def identity(lo=0.0, hi=1.0):
    """The classical driver g(t) = t."""
    return Derivator([Segment.affine(lo, hi, 1.0, 0.0)])


def regular_points(d, a, b, n):
    """n sample points of (a, b) at which d is locally affine and increasing.

    Points stay clear of segment boundaries, atoms and constancy runs (5%
    margin per segment), so two-sided derivative quotients are well posed
    there.  Raises DomainError when (a, b) meets no affine interior.
    """
    if n < 1:
        raise DomainError(f"need n >= 1 sample points, got {n}")
    spans = []
    for seg in d.segments:
        if seg.kind != "affine":
            continue
        lo, hi = max(seg.lo, float(a)), min(seg.hi, float(b))
        if hi <= lo:
            continue
        margin = 0.05 * (hi - lo)
        spans.append((lo + margin, hi - margin))
    total = sum(hi - lo for lo, hi in spans)
    if total <= 0.0:
        raise DomainError(
            f"({a}, {b}) contains no affine interior of the derivator"
        )
    offsets = [(k + 0.5) * total / n for k in range(n)]
    pts = []
    i = 0
    acc = 0.0
    for lo, hi in spans:
        length = hi - lo
        while i < n and offsets[i] <= acc + length:
            pts.append(lo + (offsets[i] - acc))
            i += 1
        acc += length
    return pts
