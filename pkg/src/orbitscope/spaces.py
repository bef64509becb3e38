"""Finitely supported sequence vectors, p-norms, and ball-generated cones.

Vectors live over N or Z and are stored sparsely with non-zero entries
only, so shift dynamics stay exact.  A cone is the set of positive
multiples of an open ball B(c, r) with ||c|| > r; membership admits a
closed form for the euclidean norm and a one-dimensional convex search
for the others.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .errors import IndexSetMismatch, ModeMismatch, NormMismatch, OrbitscopeError
from .numeric import (
    QC,
    Mode,
    abs2,
    conj,
    default_mode,
    exact_sqrt,
    is_zero_scalar,
    make_scalar,
    mode_of_scalar,
    real_value,
    strict_gt,
    sum_sqrt_cmp,
    to_float,
    TOL_EQ,
)


class IndexSet(Enum):
    NATURALS = "N"
    INTEGERS = "Z"

    def contains(self, i: int) -> bool:
        return i >= 0 if self is IndexSet.NATURALS else True


class NormTag(Enum):
    P1 = "p1"
    P2 = "p2"
    PINF = "pinf"


class SeqVector:
    """Finitely supported vector; immutable by convention.

    Entries are a sparse map index -> non-zero scalar.  All arithmetic
    preserves the canonical form (zeros are dropped) and refuses to mix
    index sets or numeric modes.
    """

    __slots__ = ("index_set", "_entries", "_mode")

    def __init__(self, index_set: IndexSet, entries: dict, mode: Mode | None = None):
        self.index_set = index_set
        clean = {}
        inferred = None
        for i, v in entries.items():
            if not isinstance(i, int):
                raise TypeError(f"index {i!r} is not an integer")
            if not index_set.contains(i):
                raise IndexSetMismatch(f"index {i} invalid for {index_set.value}")
            if is_zero_scalar(v):
                continue
            m = mode_of_scalar(v)
            if inferred is None:
                inferred = m
            elif inferred is not m:
                raise ModeMismatch("mixed exact and float entries")
            clean[i] = v
        if inferred is None:
            inferred = mode or default_mode()
        elif mode is not None and mode is not inferred:
            raise ModeMismatch("declared mode disagrees with entry scalars")
        self._entries = clean
        self._mode = inferred

    # -- constructors --------------------------------------------------

    @classmethod
    def from_entries(cls, index_set: IndexSet, raw: dict, mode: Mode | None = None) -> "SeqVector":
        mode = mode or default_mode()
        return cls(index_set, {i: make_scalar(v, mode) for i, v in raw.items()}, mode)

    @classmethod
    def basis(cls, index_set: IndexSet, i: int, coeff=1, mode: Mode | None = None) -> "SeqVector":
        return cls.from_entries(index_set, {i: coeff}, mode)

    @classmethod
    def zero(cls, index_set: IndexSet, mode: Mode | None = None) -> "SeqVector":
        return cls(index_set, {}, mode or default_mode())

    # -- basic queries ---------------------------------------------------

    @property
    def mode(self) -> Mode:
        return self._mode

    def entry(self, i: int):
        from .numeric import scalar_zero

        return self._entries.get(i, scalar_zero(self._mode))

    def items(self):
        return sorted(self._entries.items())

    @property
    def support(self):
        return sorted(self._entries)

    @property
    def is_zero(self) -> bool:
        return not self._entries

    @property
    def support_min(self):
        return min(self._entries) if self._entries else None

    @property
    def support_max(self):
        return max(self._entries) if self._entries else None

    def __len__(self):
        return len(self._entries)

    def key(self):
        """Canonical hashable form, used for distinct-point counting."""
        out = []
        for i, v in self.items():
            if isinstance(v, QC):
                out.append((i, v.re, v.im))
            else:
                out.append((i, v.real, v.imag))
        return (self.index_set.value, tuple(out))

    def __eq__(self, other):
        return (isinstance(other, SeqVector)
                and self.index_set is other.index_set
                and self._entries == other._entries)

    def __repr__(self):
        inner = ", ".join(f"{i}: {v}" for i, v in self.items())
        return f"SeqVector({self.index_set.value}, {{{inner}}})"

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: "SeqVector"):
        if self.index_set is not other.index_set:
            raise IndexSetMismatch("cannot combine vectors over N and Z")
        if self._entries and other._entries and self._mode is not other._mode:
            raise ModeMismatch("cannot combine exact and float vectors")

    def __add__(self, other: "SeqVector") -> "SeqVector":
        self._check(other)
        entries = dict(self._entries)
        for i, v in other._entries.items():
            if i in entries:
                entries[i] = entries[i] + v
            else:
                entries[i] = v
        return SeqVector(self.index_set, entries, self._mode)

    def __sub__(self, other: "SeqVector") -> "SeqVector":
        return self + (-other)

    def __neg__(self) -> "SeqVector":
        return SeqVector(self.index_set, {i: -v for i, v in self._entries.items()}, self._mode)

    def scale(self, factor) -> "SeqVector":
        s = make_scalar(factor, self._mode)
        return SeqVector(self.index_set,
                         {i: v * s for i, v in self._entries.items()}, self._mode)

    def restrict(self, indices) -> "SeqVector":
        keep = set(indices)
        return SeqVector(self.index_set,
                         {i: v for i, v in self._entries.items() if i in keep}, self._mode)

    def drop(self, indices) -> "SeqVector":
        skip = set(indices)
        return SeqVector(self.index_set,
                         {i: v for i, v in self._entries.items() if i not in skip}, self._mode)

    # -- serialization -----------------------------------------------------

    def to_jsonable(self):
        entries = []
        for i, v in self.items():
            if isinstance(v, QC):
                entries.append([i, str(v.re), str(v.im)])
            else:
                entries.append([i, v.real, v.imag])
        return {"index_set": self.index_set.value, "entries": entries}

    @classmethod
    def from_jsonable(cls, obj, mode: Mode | None = None) -> "SeqVector":
        try:
            index_set = IndexSet(obj["index_set"])
            raw = {}
            for item in obj["entries"]:
                i, re, im = item
                raw[int(i)] = (re, im)
        except (KeyError, TypeError, ValueError) as exc:
            raise OrbitscopeError(f"malformed vector JSON: {exc}") from exc
        return cls.from_entries(index_set, raw, mode)


# -- norms ------------------------------------------------------------------


def norm(v: SeqVector, p: NormTag):
    """p-norm of the finite support.

    Exact mode returns a Fraction whenever the value is rational (always
    for real vectors under P1/PINF, perfect squares under P2) and a float
    approximation otherwise; comparisons should go through norm_lt /
    norm_gt, which are exact in exact mode regardless.
    """
    if v.mode is Mode.EXACT:
        terms = [abs2(val) for _, val in v.items()]
        if not terms:
            return Fraction(0)
        if p is NormTag.P2:
            s = sum(terms)
            r = exact_sqrt(s)
            return r if r is not None else math.sqrt(to_float(s))
        if p is NormTag.PINF:
            best = max(terms)
            r = exact_sqrt(best)
            return r if r is not None else math.sqrt(to_float(best))
        parts = [exact_sqrt(t) for t in terms]
        if all(x is not None for x in parts):
            return sum(parts, Fraction(0))
        return sum(math.sqrt(to_float(t)) for t in terms)
    # float64
    terms = [abs2(val) for _, val in v.items()]
    if not terms:
        return 0.0
    if p is NormTag.P2:
        return math.sqrt(sum(terms))
    if p is NormTag.PINF:
        return math.sqrt(max(terms))
    return sum(math.sqrt(t) for t in terms)


def _norm_cmp_exact(v: SeqVector, p: NormTag, bound: Fraction) -> int:
    """Exact three-way comparison of ||v||_p against a rational bound >= 0."""
    if bound < 0:
        return 1 if not v.is_zero else (0 if bound == 0 else 1)
    terms = [abs2(val) for _, val in v.items()]
    if not terms:
        return -1 if bound > 0 else 0
    b2 = bound * bound
    if p is NormTag.P2:
        s = sum(terms)
        return -1 if s < b2 else (0 if s == b2 else 1)
    if p is NormTag.PINF:
        worst = max(terms)
        return -1 if worst < b2 else (0 if worst == b2 else 1)
    return sum_sqrt_cmp(terms, bound)


def norm_lt(v: SeqVector, p: NormTag, bound) -> bool:
    """Strict ||v||_p < bound under the active strictness policy."""
    if v.mode is Mode.EXACT:
        return _norm_cmp_exact(v, p, real_value(bound, Mode.EXACT)) < 0
    return to_float(norm(v, p)) < to_float(bound) - TOL_EQ


def norm_gt(v: SeqVector, p: NormTag, bound) -> bool:
    """Strict ||v||_p > bound under the active strictness policy."""
    if v.mode is Mode.EXACT:
        return _norm_cmp_exact(v, p, real_value(bound, Mode.EXACT)) > 0
    return to_float(norm(v, p)) > to_float(bound) + TOL_EQ


def inner_real(x: SeqVector, c: SeqVector):
    """Real part of the l2 inner product <x, c>."""
    x._check(c)
    total = None
    for i, xv in x._entries.items():
        cv = c._entries.get(i)
        if cv is None:
            continue
        term = xv * conj(cv)
        total = term if total is None else total + term
    if total is None:
        return Fraction(0) if x.mode is Mode.EXACT else 0.0
    return total.re if isinstance(total, QC) else total.real


# -- cones -------------------------------------------------------------------


@dataclass(frozen=True)
class OpenCone:
    """The open cone {lambda * B(center, radius) : lambda > 0}.

    Requires ||center|| > radius so the closure of the generating ball
    misses 0 and the cone is proper.
    """

    center: SeqVector
    radius: object
    norm: NormTag
    _radius_value: object = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        r = real_value(self.radius, self.center.mode)
        if not (to_float(r) > 0):
            raise OrbitscopeError("cone radius must be positive")
        if not norm_gt(self.center, self.norm, r):
            raise OrbitscopeError("cone requires ||center|| > radius")
        object.__setattr__(self, "_radius_value", r)

    @property
    def mode(self) -> Mode:
        return self.center.mode

    def radius_value(self):
        return self._radius_value

    def to_jsonable(self):
        return {
            "center": self.center.to_jsonable(),
            "radius": str(self._radius_value) if isinstance(self._radius_value, Fraction)
            else self._radius_value,
            "norm": self.norm.value,
        }


def _contains_p2_closed_form(C: OpenCone, x: SeqVector) -> bool:
    # x in cone(B(c,r))  iff  <x,c> > 0 and <x,c>^2 > ||x||^2 (||c||^2 - r^2)
    mode = x.mode
    ip = inner_real(x, C.center)
    zero = Fraction(0) if mode is Mode.EXACT else 0.0
    if not strict_gt(ip, zero, mode):
        return False
    r = C.radius_value()
    x2 = sum((abs2(v) for _, v in x.items()), zero)
    c2 = sum((abs2(v) for _, v in C.center.items()), zero)
    return strict_gt(ip * ip, x2 * (c2 - r * r), mode)


def _contains_by_minimization(C: OpenCone, x: SeqVector, levels: int = 48) -> bool:
    # minimize g(lam) = ||x - lam c|| - lam r over lam > 0; member iff min < 0.
    # Float evaluations guide the search; the verdict is an exact strict
    # check of ||x - lam c|| < lam r at the best dyadic candidates.
    if x.is_zero:
        return False
    p = C.norm
    c = C.center
    r_f = to_float(C.radius_value())
    x_f = to_float(norm(x, p))
    c_f = to_float(norm(c, p))
    hi = x_f / (c_f - r_f) + 1.0
    lo = 0.0

    def g(lam: float) -> float:
        return to_float(norm(x - c.scale(lam), p)) - lam * r_f

    for _ in range(levels):
        step = (hi - lo) / 8.0
        if step <= 0:
            break
        values = [(g(lo + k * step), k) for k in range(9)]
        _, kbest = min(values)
        new_lo = lo + max(kbest - 1, 0) * step
        new_hi = lo + min(kbest + 1, 8) * step
        lo, hi = new_lo, new_hi
        if hi - lo < 1e-14 * max(1.0, hi):
            break
    candidates = {lo, (lo + hi) / 2.0, hi}
    mode = x.mode
    for lam in sorted(candidates):
        if lam <= 0:
            continue
        lam_s = real_value(lam, mode)
        if norm_lt(x - c.scale(lam_s), p, lam_s * C.radius_value()):
            return True
    return False


def cone_contains(C: OpenCone, x: SeqVector, method: str = "auto") -> bool:
    """Exact membership of x in the ball-generated open cone C."""
    if x.index_set is not C.center.index_set:
        raise IndexSetMismatch("cone and vector index sets differ")
    if x._entries and x.mode is not C.mode:
        raise ModeMismatch("cone and vector numeric modes differ")
    if x.is_zero:
        return False
    if method == "closed-form" or (method == "auto" and C.norm is NormTag.P2):
        if C.norm is not NormTag.P2:
            raise NormMismatch("closed form applies to the euclidean norm only")
        return _contains_p2_closed_form(C, x)
    if method not in ("auto", "minimize"):
        raise OrbitscopeError(f"unknown membership method {method!r}")
    return _contains_by_minimization(C, x)


def cone_sample(C: OpenCone, count: int, seed: int, *,
                scale_range=(0.125, 8.0), support_pad: int = 2,
                interior_margin: float = 0.9) -> list[SeqVector]:
    """Deterministic sample of cone members: lam * (c + u), ||u|| < r.

    lam is log-uniform over scale_range and u is a seeded direction in
    the open radius-r ball, restricted to the center's support window
    padded by support_pad, then shrunk by interior_margin so every
    sample passes the exact membership test with room to spare.
    """
    if count < 0:
        raise OrbitscopeError("count must be >= 0")
    rng = random.Random(seed)
    c = C.center
    mode = C.mode
    p = C.norm
    lo = c.support_min - support_pad
    hi = c.support_max + support_pad
    if c.index_set is IndexSet.NATURALS:
        lo = max(lo, 0)
    window = list(range(lo, hi + 1))
    r_f = to_float(C.radius_value())
    out = []
    for _ in range(count):
        lam = math.exp(rng.uniform(math.log(scale_range[0]), math.log(scale_range[1])))
        g = [rng.gauss(0.0, 1.0) for _ in window]
        if p is NormTag.P2:
            gn = math.sqrt(sum(t * t for t in g))
        elif p is NormTag.P1:
            gn = sum(abs(t) for t in g)
        else:
            gn = max(abs(t) for t in g)
        radius = r_f * interior_margin * rng.random() ** (1.0 / len(window))
        if gn == 0.0:
            g = [1.0] + [0.0] * (len(window) - 1)
            gn = 1.0
        u_entries = {i: gi * radius / gn for i, gi in zip(window, g)}
        u = SeqVector.from_entries(c.index_set, u_entries, mode)
        if not norm_lt(u, p, C.radius_value()):
            raise OrbitscopeError("sampled perturbation escaped the ball")
        sample = (c + u).scale(real_value(lam, mode))
        if not cone_contains(C, sample):
            raise OrbitscopeError("sampled vector failed the membership re-check")
        out.append(sample)
    return out
