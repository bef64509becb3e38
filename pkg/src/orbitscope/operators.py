"""Weighted shifts, diagonal operators, and finite block direct sums.

Action convention (fixed): a backward shift sends e_n to a_n * e_{n-1}
(e_0 to 0 in the unilateral case), a forward shift sends e_n to
a_n * e_{n+1}, a diagonal operator sends e_n to a_n * e_n.  Powers are
computed from closed-form weight products along paths, never by n-fold
matrix application, so they are exact and O(support) per power.

Float64-mode magnitudes are tracked in log2 and error out past 2^900
instead of silently overflowing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import (
    ConfigError,
    IndecisiveSpectrum,
    IndexSetMismatch,
    NumericOverflow,
    OrbitscopeError,
)
from .numeric import (
    QC,
    Mode,
    OVERFLOW_LOG2,
    log2_abs,
    make_scalar,
    phase_of,
    unit_power,
)
from .spaces import IndexSet, SeqVector


# -- weight rules -------------------------------------------------------------


class WeightRule:
    """Total map index -> non-zero weight with closed-form range products."""

    kind = "abstract"

    def weight_at(self, j: int) -> QC:
        raise NotImplementedError

    def product_exact(self, lo: int, hi: int) -> QC:
        """Product of weights over the index interval [lo, hi]."""
        raise NotImplementedError

    def product_log2(self, lo: int, hi: int) -> tuple[float, complex]:
        raise NotImplementedError

    def sup_abs(self) -> float:
        raise NotImplementedError

    def inf_abs(self) -> float:
        raise NotImplementedError

    def log2_abs_at(self, j: int) -> float:
        return log2_abs(self.weight_at(j))

    def to_jsonable(self) -> dict:
        raise NotImplementedError


def _coerce_weight(value) -> QC:
    w = make_scalar(value, Mode.EXACT)
    if w.is_zero:
        raise ConfigError("weights must be non-zero")
    return w


def _weight_jsonable(w: QC):
    if w.im == 0:
        return str(w.re)
    return [str(w.re), str(w.im)]


@dataclass(frozen=True)
class Constant(WeightRule):
    value: QC

    kind = "constant"

    def __post_init__(self):
        object.__setattr__(self, "value", _coerce_weight(self.value))

    def weight_at(self, j: int) -> QC:
        return self.value

    def product_exact(self, lo: int, hi: int) -> QC:
        if hi < lo:
            return QC(Fraction(1))
        return self.value ** (hi - lo + 1)

    def product_log2(self, lo: int, hi: int):
        if hi < lo:
            return 0.0, complex(1.0, 0.0)
        n = hi - lo + 1
        return n * log2_abs(self.value), unit_power(phase_of(self.value), n)

    def sup_abs(self) -> float:
        return math.sqrt(float(self.value.abs2()))

    inf_abs = sup_abs

    def to_jsonable(self):
        return {"kind": "constant", "value": _weight_jsonable(self.value)}


@dataclass(frozen=True)
class PiecewiseTwoSided(WeightRule):
    """One weight for indices n >= 1, another for n <= 0."""

    positive: QC
    nonpositive: QC

    kind = "piecewise_two_sided"

    def __post_init__(self):
        object.__setattr__(self, "positive", _coerce_weight(self.positive))
        object.__setattr__(self, "nonpositive", _coerce_weight(self.nonpositive))

    def weight_at(self, j: int) -> QC:
        return self.positive if j >= 1 else self.nonpositive

    def _counts(self, lo: int, hi: int) -> tuple[int, int]:
        if hi < lo:
            return 0, 0
        total = hi - lo + 1
        pos = max(0, hi - max(lo, 1) + 1) if hi >= 1 else 0
        return pos, total - pos

    def product_exact(self, lo: int, hi: int) -> QC:
        a, b = self._counts(lo, hi)
        return (self.positive ** a) * (self.nonpositive ** b)

    def product_log2(self, lo: int, hi: int):
        a, b = self._counts(lo, hi)
        lg = a * log2_abs(self.positive) + b * log2_abs(self.nonpositive)
        ph = unit_power(phase_of(self.positive), a) * unit_power(phase_of(self.nonpositive), b)
        return lg, ph

    def sup_abs(self) -> float:
        return max(math.sqrt(float(self.positive.abs2())),
                   math.sqrt(float(self.nonpositive.abs2())))

    def inf_abs(self) -> float:
        return min(math.sqrt(float(self.positive.abs2())),
                   math.sqrt(float(self.nonpositive.abs2())))

    def to_jsonable(self):
        return {"kind": "piecewise_two_sided",
                "positive": _weight_jsonable(self.positive),
                "nonpositive": _weight_jsonable(self.nonpositive)}


@dataclass(frozen=True)
class Periodic(WeightRule):
    values: tuple

    kind = "periodic"

    def __post_init__(self):
        vals = tuple(_coerce_weight(v) for v in self.values)
        if not vals:
            raise ConfigError("periodic rule needs at least one weight")
        object.__setattr__(self, "values", vals)

    def weight_at(self, j: int) -> QC:
        return self.values[j % len(self.values)]

    def product_exact(self, lo: int, hi: int) -> QC:
        if hi < lo:
            return QC(Fraction(1))
        p = len(self.values)
        count = hi - lo + 1
        cycles, rem = divmod(count, p)
        full = QC(Fraction(1))
        for v in self.values:
            full = full * v
        out = full ** cycles
        for j in range(lo + cycles * p, hi + 1):
            out = out * self.weight_at(j)
        return out

    def product_log2(self, lo: int, hi: int):
        if hi < lo:
            return 0.0, complex(1.0, 0.0)
        p = len(self.values)
        count = hi - lo + 1
        cycles = count // p
        lg_full = sum(log2_abs(v) for v in self.values)
        ph = complex(1.0, 0.0)
        for v in self.values:
            ph *= phase_of(v)
        lg = cycles * lg_full
        phase = unit_power(ph, cycles)
        for j in range(lo + cycles * p, hi + 1):
            w = self.weight_at(j)
            lg += log2_abs(w)
            phase *= phase_of(w)
        return lg, phase

    def sup_abs(self) -> float:
        return max(math.sqrt(float(v.abs2())) for v in self.values)

    def inf_abs(self) -> float:
        return min(math.sqrt(float(v.abs2())) for v in self.values)

    def to_jsonable(self):
        return {"kind": "periodic", "values": [_weight_jsonable(v) for v in self.values]}


@dataclass(frozen=True)
class Table(WeightRule):
    """Finite overrides on top of a default weight."""

    entries: tuple
    default: QC

    kind = "table"

    def __post_init__(self):
        if isinstance(self.entries, dict):
            items = self.entries.items()
        else:
            items = self.entries
        clean = tuple(sorted((int(i), _coerce_weight(v)) for i, v in items))
        object.__setattr__(self, "entries", clean)
        object.__setattr__(self, "default", _coerce_weight(self.default))

    def _lookup(self, j: int) -> QC | None:
        for i, v in self.entries:
            if i == j:
                return v
        return None

    def weight_at(self, j: int) -> QC:
        v = self._lookup(j)
        return v if v is not None else self.default

    def product_exact(self, lo: int, hi: int) -> QC:
        if hi < lo:
            return QC(Fraction(1))
        count = hi - lo + 1
        out = QC(Fraction(1))
        overrides = 0
        for i, v in self.entries:
            if lo <= i <= hi:
                out = out * v
                overrides += 1
        return out * (self.default ** (count - overrides))

    def product_log2(self, lo: int, hi: int):
        if hi < lo:
            return 0.0, complex(1.0, 0.0)
        count = hi - lo + 1
        lg = 0.0
        ph = complex(1.0, 0.0)
        overrides = 0
        for i, v in self.entries:
            if lo <= i <= hi:
                lg += log2_abs(v)
                ph *= phase_of(v)
                overrides += 1
        rest = count - overrides
        lg += rest * log2_abs(self.default)
        ph *= unit_power(phase_of(self.default), rest)
        return lg, ph

    def sup_abs(self) -> float:
        vals = [math.sqrt(float(v.abs2())) for _, v in self.entries]
        vals.append(math.sqrt(float(self.default.abs2())))
        return max(vals)

    def inf_abs(self) -> float:
        vals = [math.sqrt(float(v.abs2())) for _, v in self.entries]
        vals.append(math.sqrt(float(self.default.abs2())))
        return min(vals)

    def to_jsonable(self):
        return {"kind": "table",
                "entries": {str(i): _weight_jsonable(v) for i, v in self.entries},
                "default": _weight_jsonable(self.default)}


def weight_rule_from_jsonable(obj: dict) -> WeightRule:
    try:
        kind = obj["kind"]
        if kind == "constant":
            return Constant(obj["value"])
        if kind == "piecewise_two_sided":
            return PiecewiseTwoSided(obj["positive"], obj["nonpositive"])
        if kind == "periodic":
            return Periodic(tuple(obj["values"]))
        if kind == "table":
            return Table(tuple((int(k), v) for k, v in obj["entries"].items()),
                         obj["default"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad weight rule: {exc}") from exc
    raise ConfigError(f"unknown weight rule kind {kind!r}")


# -- weight products -----------------------------------------------------------


@dataclass(frozen=True)
class WeightProduct:
    """Scalar multiplying the surviving coordinate of a power of a shift."""

    log2_magnitude: float
    phase: complex
    exact_value: QC | None
    is_zero: bool = False

    @classmethod
    def zero(cls) -> "WeightProduct":
        return cls(float("-inf"), complex(1.0, 0.0), QC(Fraction(0)), True)

    @classmethod
    def one(cls) -> "WeightProduct":
        return cls(0.0, complex(1.0, 0.0), QC(Fraction(1)))

    def as_scalar(self, mode: Mode):
        if self.is_zero:
            return QC(Fraction(0)) if mode is Mode.EXACT else complex(0.0, 0.0)
        if mode is Mode.EXACT:
            if self.exact_value is None:
                raise OrbitscopeError("exact product not available")
            return self.exact_value
        if self.log2_magnitude > OVERFLOW_LOG2:
            raise NumericOverflow(
                f"weight product magnitude 2^{self.log2_magnitude:.1f} exceeds policy")
        return self.phase * (2.0 ** self.log2_magnitude)


def _product(rule: WeightRule, lo: int, hi: int, exact: bool) -> WeightProduct:
    lg, ph = rule.product_log2(lo, hi)
    value = rule.product_exact(lo, hi) if exact else None
    return WeightProduct(lg, ph, value)


# -- operators -----------------------------------------------------------------


class Shape(Enum):
    UNILATERAL_BACKWARD = "unilateral_backward"
    BILATERAL_BACKWARD = "bilateral_backward"
    BILATERAL_FORWARD = "bilateral_forward"
    DIAGONAL = "diagonal"
    BLOCK_DIRECT_SUM = "block_direct_sum"


_SIMPLE_KINDS = {
    Shape.UNILATERAL_BACKWARD: "backward",
    Shape.BILATERAL_BACKWARD: "backward",
    Shape.BILATERAL_FORWARD: "forward",
    Shape.DIAGONAL: "diagonal",
}


@dataclass(frozen=True)
class Band:
    """Inclusive index interval; None means unbounded on that side."""

    lo: int | None
    hi: int | None

    def contains(self, i: int) -> bool:
        if self.lo is not None and i < self.lo:
            return False
        if self.hi is not None and i > self.hi:
            return False
        return True

    def overlaps(self, other: "Band") -> bool:
        lo = max(x for x in (self.lo, other.lo) if x is not None) \
            if (self.lo is not None or other.lo is not None) else None
        hi = min(x for x in (self.hi, other.hi) if x is not None) \
            if (self.hi is not None or other.hi is not None) else None
        if lo is None or hi is None:
            return True
        return lo <= hi

    def to_jsonable(self):
        return [self.lo, self.hi]


@dataclass(frozen=True)
class Block:
    band: Band
    kind: str  # backward | forward | diagonal
    weights: WeightRule

    def __post_init__(self):
        if self.kind not in ("backward", "forward", "diagonal"):
            raise ConfigError(f"unknown block kind {self.kind!r}")


@dataclass(frozen=True)
class ShiftOperator:
    shape: Shape
    index_set: IndexSet
    weights: WeightRule | None = None
    blocks: tuple[Block, ...] = ()
    label: str = ""

    def __post_init__(self):
        if self.shape is Shape.UNILATERAL_BACKWARD and self.index_set is not IndexSet.NATURALS:
            raise ConfigError("unilateral backward shift requires the naturals")
        if self.shape in (Shape.BILATERAL_BACKWARD, Shape.BILATERAL_FORWARD) \
                and self.index_set is not IndexSet.INTEGERS:
            raise ConfigError("bilateral shifts require the integers")
        if self.shape is Shape.BLOCK_DIRECT_SUM:
            if self.weights is not None:
                raise ConfigError("block direct sums carry weights per block")
            bands = [b.band for b in self.blocks]
            for i in range(len(bands)):
                for j in range(i + 1, len(bands)):
                    if bands[i].overlaps(bands[j]):
                        raise ConfigError("block bands must be disjoint")
            if self.index_set is IndexSet.NATURALS:
                for b in self.blocks:
                    if b.band.lo is None or b.band.lo < 0:
                        raise ConfigError("naturals blocks need bands within N")
        elif self.weights is None:
            raise ConfigError("simple shapes need a weight rule")

    # Components unify the action logic: every operator is a disjoint union
    # of (kind, weights, band) pieces with annihilation at band edges.
    def components(self) -> tuple[tuple[str, WeightRule, Band], ...]:
        if self.shape is Shape.BLOCK_DIRECT_SUM:
            return tuple((b.kind, b.weights, b.band) for b in self.blocks)
        if self.index_set is IndexSet.NATURALS:
            band = Band(0, None)
        else:
            band = Band(None, None)
        return ((_SIMPLE_KINDS[self.shape], self.weights, band),)

    def component_for(self, i: int):
        for comp in self.components():
            if comp[2].contains(i):
                return comp
        return None

    def sup_abs_weight(self) -> float:
        return max(w.sup_abs() for _, w, _ in self.components())

    def inf_abs_weight(self) -> float:
        return min(w.inf_abs() for _, w, _ in self.components())

    @property
    def is_backward_shift(self) -> bool:
        return self.shape in (Shape.UNILATERAL_BACKWARD, Shape.BILATERAL_BACKWARD)

    @property
    def annihilates(self) -> bool:
        """True when some path can exit the domain (backward at a floor)."""
        for kind, _, band in self.components():
            if kind == "backward" and band.lo is not None:
                return True
            if kind == "forward" and band.hi is not None:
                return True
        return False

    def to_jsonable(self):
        out = {"shape": self.shape.value, "index_set": self.index_set.value}
        if self.label:
            out["label"] = self.label
        if self.shape is Shape.BLOCK_DIRECT_SUM:
            out["blocks"] = [{"band": b.band.to_jsonable(), "kind": b.kind,
                              "weights": b.weights.to_jsonable()} for b in self.blocks]
        else:
            out["weights"] = self.weights.to_jsonable()
        return out


def _step(kind: str, band: Band, s: int, n: int):
    """Landing index of an n-step path from s, or None when annihilated."""
    if kind == "backward":
        t = s - n
        return t if band.contains(t) else None
    if kind == "forward":
        t = s + n
        return t if band.contains(t) else None
    return s


def _path_weight_interval(kind: str, s: int, t: int, n: int) -> tuple[int, int]:
    if kind == "backward":
        return t + 1, s
    if kind == "forward":
        return s, t - 1 if n > 0 else s - 1
    return s, s  # diagonal placeholder; handled separately


def path_target(T: ShiftOperator, s: int, n: int) -> int | None:
    """Index where the mass at source s lands after n steps, if it survives."""
    comp = T.component_for(s)
    if comp is None:
        raise IndexSetMismatch(f"index {s} lies in no band of the operator")
    kind, _, band = comp
    return _step(kind, band, s, n)

def path_source(T: ShiftOperator, j: int, n: int) -> int | None:
    """Source index whose mass lands at j after n steps, if any."""
    comp = T.component_for(j)
    if comp is None:
        return None
    kind, _, band = comp
    if kind == "backward":
        s = j + n
    elif kind == "forward":
        s = j - n
    else:
        s = j
    if not band.contains(s):
        return None
    if not T.index_set.contains(s):
        return None
    return s


def weight_product(T: ShiftOperator, target_index: int, n: int) -> WeightProduct:
    """Product of the n weights along the path landing at target_index.

    Returns the exact zero product when no source reaches the target
    (e.g. a unilateral path would have to exit N).
    """
    if n < 0:
        raise OrbitscopeError("power must be non-negative")
    if n == 0:
        return WeightProduct.one()
    comp = T.component_for(target_index)
    if comp is None:
        return WeightProduct.zero()
    kind, weights, band = comp
    s = path_source(T, target_index, n)
    if s is None:
        return WeightProduct.zero()
    if kind == "diagonal":
        lg, ph = weights.product_log2(s, s)
        value = weights.product_exact(s, s) ** n
        return WeightProduct(lg * n, unit_power(ph, n), value)
    lo, hi = _path_weight_interval(kind, s, target_index, n)
    return _product(weights, lo, hi, exact=True)


def apply(T: ShiftOperator, v: SeqVector) -> SeqVector:
    """Single application of T; exact in both numeric modes."""
    if v.index_set is not T.index_set:
        raise IndexSetMismatch("operator and vector index sets differ")
    entries: dict = {}
    for s, val in v.items():
        comp = T.component_for(s)
        if comp is None:
            raise IndexSetMismatch(f"vector support index {s} lies in no band")
        kind, weights, band = comp
        t = _step(kind, band, s, 1)
        if t is None:
            continue
        w = weights.weight_at(s)
        coeff = w if v.mode is Mode.EXACT else w.to_complex()
        out = coeff * val
        if v.mode is Mode.FLOAT64 and out != 0 and not (
                math.isfinite(out.real) and math.isfinite(out.imag)):
            raise NumericOverflow("single-step application overflowed")
        if t in entries:
            entries[t] = entries[t] + out
        else:
            entries[t] = out
    return SeqVector(v.index_set, entries, v.mode)


def apply_power(T: ShiftOperator, n: int, v: SeqVector) -> SeqVector:
    """T^n v via exact weight products along length-n paths."""
    if n < 0:
        raise OrbitscopeError("power must be non-negative")
    if v.index_set is not T.index_set:
        raise IndexSetMismatch("operator and vector index sets differ")
    if n == 0:
        return v
    entries: dict = {}
    exact = v.mode is Mode.EXACT
    for s, val in v.items():
        comp = T.component_for(s)
        if comp is None:
            raise IndexSetMismatch(f"vector support index {s} lies in no band")
        kind, weights, band = comp
        t = _step(kind, band, s, n)
        if t is None:
            continue
        if kind == "diagonal":
            lg, ph = weights.product_log2(s, s)
            wp = WeightProduct(lg * n, unit_power(ph, n),
                               weights.product_exact(s, s) ** n if exact else None)
        else:
            lo, hi = _path_weight_interval(kind, s, t, n)
            wp = _product(weights, lo, hi, exact)
        if not exact and wp.log2_magnitude + log2_abs(val) > OVERFLOW_LOG2:
            raise NumericOverflow(
                f"T^{n} entry at {t} has magnitude past 2^{OVERFLOW_LOG2:.0f}")
        coeff = wp.as_scalar(v.mode)
        out = coeff * val
        if t in entries:
            entries[t] = entries[t] + out
        else:
            entries[t] = out
    return SeqVector(v.index_set, entries, v.mode)


# -- spectral radius ------------------------------------------------------------


@dataclass(frozen=True)
class SpectralTrace:
    """Gelfand quotients ||T^n||^{1/n} over a window, plus the point estimate.

    For shifts and diagonals the n-th quotient is the exact supremum of
    n-step geometric means of weight magnitudes over the window.
    """

    quotients: tuple[float, ...]
    estimate: float
    n_max: int
    window: tuple[int, int]

    def to_jsonable(self):
        return {"quotients": list(self.quotients), "estimate": self.estimate,
                "n_max": self.n_max, "window": list(self.window)}


def spectral_radius_estimate(T: ShiftOperator, n_max: int,
                             window: tuple[int, int]) -> SpectralTrace:
    if n_max < 1:
        raise OrbitscopeError("n_max must be >= 1")
    win_lo, win_hi = window
    if win_hi < win_lo:
        raise OrbitscopeError("empty window")
    quotients = []
    comp_data = []
    for kind, weights, band in T.components():
        lo = win_lo
        hi = win_hi
        if band.lo is not None:
            lo = max(lo, band.lo)
        if band.hi is not None:
            hi = min(hi, band.hi)
        if hi < lo:
            continue
        if kind == "backward":
            a, b = lo - n_max, hi
        elif kind == "forward":
            a, b = lo, hi + n_max - 1
        else:
            a, b = lo, hi
        prefix = [0.0]
        for j in range(a, b + 1):
            prefix.append(prefix[-1] + weights.log2_abs_at(j))
        comp_data.append((kind, band, lo, hi, a, prefix))
    for n in range(1, n_max + 1):
        best = None
        for kind, band, lo, hi, a, prefix in comp_data:
            if kind == "diagonal":
                vals = [prefix[s - a + 1] - prefix[s - a] for s in range(lo, hi + 1)]
                cand = max(vals) if vals else None
            elif kind == "backward":
                s_lo = lo
                if band.lo is not None:
                    s_lo = max(s_lo, band.lo + n)
                cand = None
                for s in range(s_lo, hi + 1):
                    if not T.index_set.contains(s - n):
                        continue
                    lg = (prefix[s - a + 1] - prefix[s - n - a + 1]) / n
                    cand = lg if cand is None else max(cand, lg)
            else:  # forward
                s_hi = hi
                if band.hi is not None:
                    s_hi = min(s_hi, band.hi - n)
                cand = None
                for s in range(lo, s_hi + 1):
                    lg = (prefix[s + n - a] - prefix[s - a]) / n
                    cand = lg if cand is None else max(cand, lg)
            if cand is not None:
                best = cand if best is None else max(best, cand)
        quotients.append(2.0 ** best if best is not None else 0.0)
    return SpectralTrace(tuple(quotients), quotients[-1], n_max, (win_lo, win_hi))


# -- Riesz-style block decomposition ---------------------------------------------


@dataclass(frozen=True)
class BandSplitter:
    """Decomposes vectors by index band into (contracting, expanding) parts."""

    contracting: tuple[Band, ...]
    expanding: tuple[Band, ...]

    def split(self, v: SeqVector) -> tuple[SeqVector, SeqVector]:
        left: dict = {}
        right: dict = {}
        for i, val in v.items():
            if any(b.contains(i) for b in self.contracting):
                left[i] = val
            elif any(b.contains(i) for b in self.expanding):
                right[i] = val
            else:
                raise OrbitscopeError(f"index {i} lies in no band of the split")
        return (SeqVector(v.index_set, left, v.mode),
                SeqVector(v.index_set, right, v.mode))


@dataclass(frozen=True)
class RieszSplit:
    contracting: ShiftOperator
    expanding: ShiftOperator
    splitter: BandSplitter
    estimates: tuple[tuple[str, float], ...]


def _block_window(band: Band, half_width: int = 256) -> tuple[int, int]:
    if band.lo is not None and band.hi is not None:
        return band.lo, band.hi
    if band.lo is not None:
        return band.lo, band.lo + half_width
    if band.hi is not None:
        return band.hi - half_width, band.hi
    return -half_width, half_width


def riesz_blocks(T: ShiftOperator, *, margin: float = 0.05,
                 n_max: int = 64) -> RieszSplit:
    """Partition a block direct sum by per-block spectral radius (<1 vs >1).

    Raises IndecisiveSpectrum when any block's estimate lands within
    ``margin`` of 1: the split hypothesis cannot be certified numerically.
    """
    if T.shape is not Shape.BLOCK_DIRECT_SUM:
        raise OrbitscopeError("riesz_blocks applies to block direct sums only")
    contracting = []
    expanding = []
    estimates = []
    for block in T.blocks:
        sub = ShiftOperator(Shape.BLOCK_DIRECT_SUM, T.index_set, blocks=(block,))
        est = spectral_radius_estimate(sub, n_max, _block_window(block.band)).estimate
        estimates.append((f"band[{block.band.lo},{block.band.hi}]", est))
        if est < 1.0 - margin:
            contracting.append(block)
        elif est > 1.0 + margin:
            expanding.append(block)
        else:
            raise IndecisiveSpectrum(
                f"block radius estimate {est:.4f} within {margin} of 1")
    t1 = ShiftOperator(Shape.BLOCK_DIRECT_SUM, T.index_set, blocks=tuple(contracting),
                       label=T.label + ":contracting" if T.label else "contracting")
    t2 = ShiftOperator(Shape.BLOCK_DIRECT_SUM, T.index_set, blocks=tuple(expanding),
                       label=T.label + ":expanding" if T.label else "expanding")
    splitter = BandSplitter(tuple(b.band for b in contracting),
                            tuple(b.band for b in expanding))
    return RieszSplit(t1, t2, splitter, tuple(estimates))


# -- presets and config ----------------------------------------------------------


def prop32_operator() -> ShiftOperator:
    """Backward bilateral shift with weights 2 (n >= 1) and 1 (n <= 0)."""
    return ShiftOperator(Shape.BILATERAL_BACKWARD, IndexSet.INTEGERS,
                         PiecewiseTwoSided(2, 1), label="paper-prop32")


PRESETS = {
    "paper-prop32": prop32_operator,
}


def shift_from_jsonable(obj: dict) -> ShiftOperator:
    if not isinstance(obj, dict):
        raise ConfigError("operator config must be an object")
    if "preset" in obj:
        name = obj["preset"]
        extra = set(obj) - {"preset"}
        if extra:
            raise ConfigError(f"unknown keys with preset: {sorted(extra)}")
        if name not in PRESETS:
            raise ConfigError(f"unknown operator preset {name!r}")
        return PRESETS[name]()
    allowed = {"shape", "index_set", "weights", "blocks", "label"}
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown operator keys: {sorted(unknown)}")
    try:
        shape = Shape(obj["shape"])
        index_set = IndexSet(obj["index_set"])
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad operator config: {exc}") from exc
    label = obj.get("label", "")
    if shape is Shape.BLOCK_DIRECT_SUM:
        blocks = []
        for b in obj.get("blocks", []):
            band = Band(b["band"][0], b["band"][1])
            blocks.append(Block(band, b["kind"], weight_rule_from_jsonable(b["weights"])))
        return ShiftOperator(shape, index_set, blocks=tuple(blocks), label=label)
    if "weights" not in obj:
        raise ConfigError("operator config needs weights")
    return ShiftOperator(shape, index_set, weight_rule_from_jsonable(obj["weights"]),
                         label=label)
