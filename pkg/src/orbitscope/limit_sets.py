"""Finite certificates for the coarse extended limit sets J, J^mix, and D.

A J-certificate is a finite list of triples (x_i, k_i, dist_i): strictly
increasing times, perturbations shrinking along an explicit schedule,
and image distances below the coarse bound.  Membership is only ever
reported as "certified to depth m at schedule eps", never as membership
in the infinite-time set itself.

Synthesis follows the explicit shift constructions:
corrections are placed at indices j + k so the image matches the target
exactly on its support, with the carried image of the base counted as
residual.  The general search back-solves coordinate by coordinate and
is budgeted in power applications; its failures are labelled reasons,
never proofs of non-membership.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    InputNotAWitnessFamily,
    NumericOverflow,
    OrbitscopeError,
    SearchFailed,
    SynthesisFailed,
    VerificationFailed,
)
from .numeric import Mode, QC, abs2, is_zero_scalar, log2_abs, make_scalar, \
    real_value, to_float
from .operators import ShiftOperator, apply_power, path_source, weight_product
from .orbits import CoarseWitness, coarse_orbit_contains
from .spaces import IndexSet, NormTag, SeqVector, norm, norm_lt


@dataclass(frozen=True)
class EpsSchedule:
    """Strictly decreasing positive perturbation radii, default 1/i."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(Fraction(v) if not isinstance(v, Fraction) else v
                     for v in self.values)
        if not vals:
            raise OrbitscopeError("schedule must be non-empty")
        for v in vals:
            if v <= 0:
                raise OrbitscopeError("schedule values must be positive")
        for a, b in zip(vals, vals[1:]):
            if not b < a:
                raise OrbitscopeError("schedule must be strictly decreasing")
        object.__setattr__(self, "values", vals)

    @classmethod
    def reciprocal(cls, m: int, scale=1) -> "EpsSchedule":
        s = Fraction(scale)
        return cls(tuple(s / i for i in range(1, m + 1)))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def scale_by(self, factor: Fraction) -> "EpsSchedule":
        f = Fraction(factor)
        return EpsSchedule(tuple(v * f for v in self.values))

    def to_jsonable(self):
        return [str(v) for v in self.values]


def _num(value):
    return str(value) if isinstance(value, Fraction) else value


@dataclass(frozen=True)
class JWitnessTriple:
    perturbed: SeqVector
    time: int
    dist: object

    def to_jsonable(self):
        return {"perturbed": self.perturbed.to_jsonable(), "time": self.time,
                "dist": _num(self.dist)}


@dataclass(frozen=True)
class JWitness:
    """Finite certificate for y in J(x,T,d) (or J^mix when mix_flag)."""

    base: SeqVector
    target: SeqVector
    bound: object
    norm_tag: NormTag
    schedule: EpsSchedule
    triples: tuple[JWitnessTriple, ...]
    mix_flag: bool = False
    op_label: str = ""

    def __post_init__(self):
        if len(self.triples) != len(self.schedule):
            raise OrbitscopeError("one triple per schedule entry required")
        times = [t.time for t in self.triples]
        for a, b in zip(times, times[1:]):
            if not b > a:
                raise OrbitscopeError("witness times must be strictly increasing")
        if self.mix_flag:
            for a, b in zip(times, times[1:]):
                if b != a + 1:
                    raise OrbitscopeError("mix witnesses need consecutive times")
        if times and times[0] < 1:
            raise OrbitscopeError("witness times must be positive")

    @property
    def times(self):
        return tuple(t.time for t in self.triples)

    def verify(self, T: ShiftOperator) -> None:
        """Independent re-check of every strict inequality in the certificate."""
        for eps, triple in zip(self.schedule, self.triples):
            if not norm_lt(triple.perturbed - self.base, self.norm_tag, eps):
                raise VerificationFailed(
                    f"perturbation at time {triple.time} not within {eps}")
            image = apply_power(T, triple.time, triple.perturbed)
            diff = image - self.target
            if not norm_lt(diff, self.norm_tag, self.bound):
                raise VerificationFailed(
                    f"image at time {triple.time} not within bound {self.bound}")
            recomputed = to_float(norm(diff, self.norm_tag))
            stored = to_float(triple.dist)
            if abs(recomputed - stored) > 1e-6 * max(1.0, abs(stored)):
                raise VerificationFailed(
                    f"stored distance {stored} disagrees with recomputed {recomputed}")

    def to_jsonable(self):
        return {
            "base": self.base.to_jsonable(),
            "target": self.target.to_jsonable(),
            "bound": _num(self.bound),
            "norm": self.norm_tag.value,
            "schedule": self.schedule.to_jsonable(),
            "triples": [t.to_jsonable() for t in self.triples],
            "mix": self.mix_flag,
            "operator": self.op_label,
        }


@dataclass(frozen=True)
class DWitness:
    """Either branch of D(x,T,d) = O(x,T,d) union J(x,T,d)."""

    kind: str  # "orbit" | "limit"
    coarse: CoarseWitness | None = None
    jwitness: JWitness | None = None

    def __post_init__(self):
        if (self.kind == "orbit") != (self.coarse is not None) or \
                (self.kind == "limit") != (self.jwitness is not None):
            raise OrbitscopeError("exactly one branch must be present")

    def verify(self, T: ShiftOperator) -> None:
        if self.coarse is not None:
            self.coarse.verify(T)
        else:
            self.jwitness.verify(T)

    def to_jsonable(self):
        return {"kind": self.kind,
                "coarse": self.coarse.to_jsonable() if self.coarse else None,
                "jwitness": self.jwitness.to_jsonable() if self.jwitness else None}


# -- scaling transforms -----------------------------------------------------------


def scale_j_witness(T: ShiftOperator, w: JWitness, factor) -> JWitness:
    """Linearity: a witness for y in J(x,T,d) scales to f*y in J(f*x,T,f*d)."""
    f = Fraction(factor) if not isinstance(factor, (Fraction, int)) else Fraction(factor)
    if f <= 0:
        raise OrbitscopeError("scaling factor must be positive")
    mode = w.base.mode if not w.base.is_zero else w.target.mode
    fs = real_value(f, mode)
    out = JWitness(
        base=w.base.scale(fs),
        target=w.target.scale(fs),
        bound=w.bound * fs if isinstance(w.bound, Fraction) else to_float(w.bound) * to_float(fs),
        norm_tag=w.norm_tag,
        schedule=w.schedule.scale_by(f),
        triples=tuple(JWitnessTriple(t.perturbed.scale(fs), t.time,
                                     t.dist * fs if isinstance(t.dist, Fraction)
                                     else to_float(t.dist) * to_float(fs))
                      for t in w.triples),
        mix_flag=w.mix_flag,
        op_label=w.op_label,
    )
    out.verify(T)
    return out


def with_bound(T: ShiftOperator, w: JWitness, new_bound) -> JWitness:
    """Monotonicity in d: the same triples certify any larger bound."""
    nb = real_value(new_bound, w.base.mode if not w.base.is_zero else w.target.mode)
    out = JWitness(w.base, w.target, nb, w.norm_tag, w.schedule, w.triples,
                   w.mix_flag, w.op_label)
    out.verify(T)
    return out


def prop31_rescale(T: ShiftOperator, w: JWitness, N) -> JWitness:
    """From a witness for N*y in J(x,T,d) to one for y in J(x/N, T, d/N).

    Iterating over growing N shrinks both the perturbation radii and the
    image distances, the finite-scale content of C being contained in
    the limit set of 0 for unilateral shifts.
    """
    n = Fraction(N)
    if n <= 0:
        raise OrbitscopeError("N must be positive")
    w.verify(T)
    return scale_j_witness(T, w, Fraction(1) / n)


# -- shift synthesis ----------------------------------------------------------------


def _correction_data(T: ShiftOperator, k: int, coords, y: SeqVector,
                     image0: SeqVector, mode: Mode):
    """Per-coordinate mismatch, source index, and weight for time k."""
    rows = []
    for j in sorted(coords):
        mismatch = y.entry(j) - image0.entry(j)
        if is_zero_scalar(mismatch):
            continue
        s = path_source(T, j, k)
        if s is None:
            rows.append((j, mismatch, None, None))
            continue
        wp = weight_product(T, j, k)
        if wp.is_zero:
            rows.append((j, mismatch, None, None))
            continue
        rows.append((j, mismatch, s, wp))
    return rows


def synthesize_shift_j_witness(T: ShiftOperator, x: SeqVector, y: SeqVector,
                               d, schedule: EpsSchedule, k_min: int = 1, *,
                               norm_tag: NormTag = NormTag.PINF,
                               k_cap: int = 10_000,
                               stagnation_window: int = 1_000) -> JWitness:
    """Constructive witness for a backward shift.

    At each time k the perturbation is supported at indices j + k so the
    image equals the target exactly on the target's support; the carried
    image of the base outside the corrected coordinates is the residual.
    Succeeds when the weight products grow enough to shrink the needed
    perturbation below each schedule radius.
    """
    if not T.is_backward_shift:
        raise OrbitscopeError("synthesis applies to backward shifts")
    if x.index_set is not T.index_set or y.index_set is not T.index_set:
        raise OrbitscopeError("index set mismatch")
    mode = x.mode if not x.is_zero else y.mode
    d_val = real_value(d, mode)
    if to_float(d_val) <= 0:
        raise OrbitscopeError("d must be positive")
    triples = []
    k_prev = k_min - 1
    best_delta = math.inf
    best_residual = math.inf
    supp_y = set(y.support)
    contracting = T.sup_abs_weight() < 1.0
    for i, eps in enumerate(schedule):
        found = None
        eps_log2 = math.log2(to_float(eps))
        best_gap = math.inf
        last_improve = k_prev
        for k in range(k_prev + 1, k_cap + 1):
            if k - last_improve > stagnation_window:
                raise SynthesisFailed(
                    f"no progress over {stagnation_window} consecutive times",
                    k_cap=k_cap, best_delta_norm=best_delta,
                    best_residual=best_residual, triple_index=i)
            image0 = apply_power(T, k, x)
            # the carried image off the target support is the residual;
            # check it before paying for exact corrections
            residual = image0.drop(supp_y)
            res_f = to_float(norm(residual, norm_tag))
            res_ok = norm_lt(residual, norm_tag, d_val)
            best_residual = min(best_residual, res_f)
            # cheap magnitude screen: a single needed correction larger
            # than the radius already sinks every p-norm
            worst = -math.inf
            ok = True
            row_data = []
            for j in supp_y:
                s = path_source(T, j, k)
                if s is None:
                    ok = False
                    break
                wp = weight_product(T, j, k)
                if wp.is_zero:
                    ok = False
                    break
                mismatch = y.entry(j) - image0.entry(j)
                if is_zero_scalar(mismatch):
                    continue
                worst = max(worst, log2_abs(mismatch) - wp.log2_magnitude)
                row_data.append((s, mismatch, wp))
            if not ok:
                continue
            if worst > eps_log2:
                best_delta = min(best_delta, 2.0 ** worst)
                if contracting:
                    # shrinking weight products only raise the needed radius
                    raise SynthesisFailed(
                        f"needed perturbation grows with k (contracting weights); "
                        f"proven at k={k}",
                        k_cap=k_cap, best_delta_norm=best_delta,
                        best_residual=best_residual, triple_index=i)
                gap = max(0.0, res_f - to_float(d_val)) + 2.0 ** worst
                if gap < best_gap - 1e-12:
                    best_gap = gap
                    last_improve = k
                continue
            if not res_ok:
                gap = res_f - to_float(d_val) + max(0.0, 2.0 ** worst - to_float(eps))
                if gap < best_gap - 1e-12:
                    best_gap = gap
                    last_improve = k
                continue
            delta_entries = {s: _div_by_product(m, wp, mode)
                             for s, m, wp in row_data}
            delta = SeqVector(x.index_set, delta_entries, mode)
            best_delta = min(best_delta, to_float(norm(delta, norm_tag)))
            if norm_lt(delta, norm_tag, eps):
                perturbed = x + delta
                image = apply_power(T, k, perturbed)
                dist = norm(image - y, norm_tag)
                found = JWitnessTriple(perturbed, k, dist)
                break
            last_improve = k  # exact radius check failed after the screen
        if found is None:
            raise SynthesisFailed(
                f"no time k <= {k_cap} meets radius {eps} at bound {d_val}",
                k_cap=k_cap, best_delta_norm=best_delta,
                best_residual=best_residual, triple_index=i)
        triples.append(found)
        k_prev = found.time
    out = JWitness(x, y, d_val, norm_tag, schedule, tuple(triples),
                   mix_flag=False, op_label=T.label)
    out.verify(T)
    return out


# -- budgeted general search -----------------------------------------------------


class Budget:
    """Hard cap on power applications for one search call."""

    def __init__(self, limit: int):
        if limit < 0:
            raise OrbitscopeError("budget must be >= 0")
        self.limit = limit
        self.used = 0

    def try_spend(self, n: int = 1) -> bool:
        if self.used + n > self.limit:
            return False
        self.used += n
        return True


@dataclass
class _Attempt:
    ok: bool
    perturbed: SeqVector | None
    dist: object | None
    delta_norm: float
    residual: float
    collapse_norm: float | None


# safety factor keeping greedy corrections strictly inside the radius
_THETA = 0.9


def _div_by_product(mismatch, wp, mode: Mode):
    """mismatch / weight-product, robust to float-mode magnitude extremes."""
    if mode is Mode.EXACT:
        return mismatch / wp.exact_value
    lg = wp.log2_magnitude
    if log2_abs(mismatch) - lg < -1040:
        return complex(0.0, 0.0)  # below float resolution; no-op correction
    return mismatch / wp.phase * (2.0 ** (-lg))


def _greedy_attempt(T: ShiftOperator, x: SeqVector, y: SeqVector, d_val, eps,
                    k: int, norm_tag: NormTag, budget: Budget,
                    mode: Mode) -> _Attempt | None:
    """One back-solve attempt at time k; None when the budget ran out."""
    if not budget.try_spend(1):
        return None
    try:
        image0 = apply_power(T, k, x)
    except NumericOverflow:
        return _Attempt(False, None, None, math.inf, math.inf, None)
    coords = set(y.support) | set(image0.support)
    rows = _correction_data(T, k, coords, y, image0, mode)
    eps_f = to_float(eps)
    d_f = to_float(d_val)
    # full back-solve: the would-be perturbed point if the radius were free;
    # skipped when shrinking weight products would make it astronomically
    # large (then it is never the collapse minimum anyway)
    collapse_norm = None
    if rows and all(r[2] is not None for r in rows) \
            and all(r[3].log2_magnitude > -64 for r in rows):
        full = {}
        for _, mismatch, s, wp in rows:
            full[s] = _div_by_product(mismatch, wp, mode)
        z = x + SeqVector(x.index_set, full, mode)
        collapse_norm = to_float(norm(z, norm_tag))
    elif not rows:
        collapse_norm = to_float(norm(x, norm_tag))
    delta_entries = {}
    uncorrected = []
    if norm_tag is NormTag.PINF:
        # coordinates are independent in the sup norm; allow partial
        # corrections that park the residual just under the bound
        for _, mismatch, s, wp in rows:
            m_f = math.sqrt(to_float(abs2(mismatch)))
            if s is None:
                uncorrected.append(m_f)
                continue
            cost = m_f / (2.0 ** wp.log2_magnitude)
            if cost < eps_f * _THETA:
                delta_entries[s] = _div_by_product(mismatch, wp, mode)
            elif m_f > d_f * _THETA:
                mu = 1.0 - (d_f * _THETA) / m_f
                if cost * mu < eps_f * _THETA:
                    scale = make_scalar(Fraction(mu).limit_denominator(1 << 40), mode)
                    delta_entries[s] = _div_by_product(mismatch, wp, mode) * scale
                    uncorrected.append(d_f * _THETA)
                else:
                    uncorrected.append(m_f)
            else:
                uncorrected.append(m_f)
    else:
        # joint budget: cheapest full corrections first
        fixable = []
        for j, m, s, wp in rows:
            m_f = math.sqrt(to_float(abs2(m)))
            if s is None:
                uncorrected.append(m_f)
                continue
            fixable.append((m_f / (2.0 ** wp.log2_magnitude), m_f, j, m, s, wp))
        fixable.sort(key=lambda r: (r[0], r[2]))
        budget_total = (eps_f * _THETA) ** 2 if norm_tag is NormTag.P2 else eps_f * _THETA
        spent = 0.0
        for cost, m_f, _, mismatch, s, wp in fixable:
            add = cost * cost if norm_tag is NormTag.P2 else cost
            if spent + add <= budget_total:
                delta_entries[s] = _div_by_product(mismatch, wp, mode)
                spent += add
            else:
                uncorrected.append(m_f)
    delta = SeqVector(x.index_set, delta_entries, mode)
    delta_norm = to_float(norm(delta, norm_tag))
    if norm_tag is NormTag.PINF:
        residual_est = max(uncorrected, default=0.0)
    elif norm_tag is NormTag.P2:
        residual_est = math.sqrt(sum(t * t for t in uncorrected))
    else:
        residual_est = sum(uncorrected)
    if not norm_lt(delta, norm_tag, eps):
        return _Attempt(False, None, None, delta_norm, residual_est, collapse_norm)
    if not budget.try_spend(1):
        return None
    try:
        image = apply_power(T, k, x + delta)
    except NumericOverflow:
        return _Attempt(False, None, None, delta_norm, math.inf, collapse_norm)
    diff = image - y
    residual = to_float(norm(diff, norm_tag))
    if norm_lt(diff, norm_tag, d_val):
        return _Attempt(True, x + delta, norm(diff, norm_tag), delta_norm,
                        residual, collapse_norm)
    return _Attempt(False, None, None, delta_norm, residual, collapse_norm)


def _structural_stop(T: ShiftOperator, x_norm: float, y_norm: float, d_f: float,
                     eps_f: float, k: int) -> str | None:
    """Sound reasons why no time >= k can possibly work."""
    sup = T.sup_abs_weight()
    if sup < 1.0:
        reach = (sup ** k) * (x_norm + eps_f)
        if y_norm - reach > d_f * (1.0 + 1e-3) + 1e-9:
            return "decay-bound"
    inf_w = T.inf_abs_weight()
    if inf_w > 1.0 and not T.annihilates and x_norm > 0:
        back = (y_norm + d_f) / (inf_w ** k)
        if x_norm - back > eps_f * (1.0 + 1e-3) + 1e-9:
            return "collapse-bound"
    return None


def search_j_witness(T: ShiftOperator, x: SeqVector, y: SeqVector, d,
                     schedule: EpsSchedule, budget: int, *,
                     norm_tag: NormTag = NormTag.PINF, k_min: int = 1,
                     k_cap: int = 10_000, stagnation_window: int = 400,
                     collapse_target: float = 1e-7) -> JWitness:
    """Per-time back-solve search with structural pruning.

    Raises SearchFailed with labelled diagnostics; failure always means
    "not found within this budget and strategy", never non-membership.
    The collapse diagnostic records the smallest fully back-solved
    perturbed-point norm seen, the mechanism behind emptiness of J-sets
    for expanding operators.
    """
    mode = x.mode if not x.is_zero else y.mode
    d_val = real_value(d, mode)
    if to_float(d_val) <= 0:
        raise OrbitscopeError("d must be positive")
    bud = Budget(budget)
    x_norm = to_float(norm(x, norm_tag))
    y_norm = to_float(norm(y, norm_tag))
    d_f = to_float(d_val)
    triples = []
    k_prev = k_min - 1
    collapse_min: float | None = None
    attempts = 0
    k_last = 0

    def fail(reason: str, i: int, best_res: float, best_delta: float):
        raise SearchFailed(
            f"triple {i + 1}: {reason}", reason=reason, triple_index=i,
            best_residual=best_res, best_delta_norm=best_delta,
            collapse_norm=collapse_min, attempts=attempts,
            budget_used=bud.used, k_last=k_last)

    def deepen_collapse(i: int, k_from: int, best_res: float, best_delta: float,
                        reason: str):
        # keep tracing the back-solved point so the emptiness mechanism
        # (x_n collapsing to 0 while x != 0) is visible in the report
        nonlocal collapse_min, attempts, k_last
        k = k_from
        while k <= k_cap and (collapse_min is None or collapse_min > collapse_target):
            att = _greedy_attempt(T, x, y, d_val, Fraction(1, 1), k, norm_tag, bud, mode)
            if att is None:
                break
            attempts += 1
            k_last = k
            if att.collapse_norm is not None:
                collapse_min = att.collapse_norm if collapse_min is None \
                    else min(collapse_min, att.collapse_norm)
            k += 1
        fail(reason, i, best_res, best_delta)

    for i, eps in enumerate(schedule):
        eps_f = to_float(eps)
        found = None
        best_res = math.inf
        best_delta = math.inf
        best_gap = math.inf
        last_improve = k_prev
        k = k_prev + 1
        while k <= k_cap:
            stop = _structural_stop(T, x_norm, y_norm, d_f, eps_f, k)
            if stop == "collapse-bound":
                deepen_collapse(i, k, best_res, best_delta, stop)
            elif stop is not None:
                fail(stop, i, best_res, best_delta)
            att = _greedy_attempt(T, x, y, d_val, eps, k, norm_tag, bud, mode)
            if att is None:
                fail("budget", i, best_res, best_delta)
            attempts += 1
            k_last = k
            if att.collapse_norm is not None:
                collapse_min = att.collapse_norm if collapse_min is None \
                    else min(collapse_min, att.collapse_norm)
            if att.ok:
                found = JWitnessTriple(att.perturbed, k, att.dist)
                break
            best_res = min(best_res, att.residual)
            best_delta = min(best_delta, att.delta_norm)
            gap = max(0.0, att.residual - d_f) + max(0.0, att.delta_norm - eps_f)
            if gap < best_gap - 1e-12:
                best_gap = gap
                last_improve = k
            if k - last_improve > stagnation_window:
                fail("stagnation", i, best_res, best_delta)
            k += 1
        if found is None:
            fail("k-cap", i, best_res, best_delta)
        triples.append(found)
        k_prev = found.time
    out = JWitness(x, y, d_val, norm_tag, schedule, tuple(triples),
                   mix_flag=False, op_label=T.label)
    out.verify(T)
    return out


def jmix_witness(T: ShiftOperator, x: SeqVector, y: SeqVector, d, m: int,
                 N_start: int, budget: int, *, norm_tag: NormTag = NormTag.PINF,
                 schedule: EpsSchedule | None = None, N_cap: int = 10_000,
                 stagnation_window: int = 200) -> JWitness:
    """Witness with consecutive times N..N+m-1 (the mixing variant)."""
    if m < 1:
        raise OrbitscopeError("m must be >= 1")
    if N_start < 1:
        raise OrbitscopeError("N_start must be >= 1")
    schedule = schedule or EpsSchedule.reciprocal(m)
    if len(schedule) != m:
        raise OrbitscopeError("schedule length must equal m")
    mode = x.mode if not x.is_zero else y.mode
    d_val = real_value(d, mode)
    if to_float(d_val) <= 0:
        raise OrbitscopeError("d must be positive")
    bud = Budget(budget)
    x_norm = to_float(norm(x, norm_tag))
    y_norm = to_float(norm(y, norm_tag))
    d_f = to_float(d_val)
    eps_min_f = to_float(schedule.values[-1])
    collapse_min: float | None = None
    attempts = 0
    best_res = math.inf
    best_delta = math.inf
    N_last = 0
    last_partial = -1
    last_improve = N_start - 1
    N = N_start
    while N <= N_cap:
        stop = _structural_stop(T, x_norm, y_norm, d_f, eps_min_f, N)
        if stop is not None:
            raise SearchFailed(
                f"mix block at N={N}: {stop}", reason=stop, triple_index=0,
                best_residual=best_res, best_delta_norm=best_delta,
                collapse_norm=collapse_min, attempts=attempts,
                budget_used=bud.used, k_last=N_last)
        triples = []
        progress = 0
        for i, eps in enumerate(schedule):
            att = _greedy_attempt(T, x, y, d_val, eps, N + i, norm_tag, bud, mode)
            if att is None:
                raise SearchFailed(
                    "mix search budget exhausted", reason="budget", triple_index=i,
                    best_residual=best_res, best_delta_norm=best_delta,
                    collapse_norm=collapse_min, attempts=attempts,
                    budget_used=bud.used, k_last=N_last)
            attempts += 1
            N_last = N + i
            if att.collapse_norm is not None:
                collapse_min = att.collapse_norm if collapse_min is None \
                    else min(collapse_min, att.collapse_norm)
            if not att.ok:
                best_res = min(best_res, att.residual)
                best_delta = min(best_delta, att.delta_norm)
                break
            progress += 1
            triples.append(JWitnessTriple(att.perturbed, N + i, att.dist))
        if len(triples) == m:
            out = JWitness(x, y, d_val, norm_tag, schedule, tuple(triples),
                           mix_flag=True, op_label=T.label)
            out.verify(T)
            return out
        if progress > last_partial:
            last_partial = progress
            last_improve = N
        if N - last_improve > stagnation_window:
            raise SearchFailed(
                "mix search stagnated", reason="stagnation", triple_index=progress,
                best_residual=best_res, best_delta_norm=best_delta,
                collapse_norm=collapse_min, attempts=attempts,
                budget_used=bud.used, k_last=N_last)
        N += 1
    raise SearchFailed(
        "mix start cap reached", reason="k-cap", triple_index=0,
        best_residual=best_res, best_delta_norm=best_delta,
        collapse_norm=collapse_min, attempts=attempts, budget_used=bud.used,
        k_last=N_last)


def d_witness(T: ShiftOperator, x: SeqVector, y: SeqVector, d, K: int,
              schedule: EpsSchedule, budget: int, *,
              norm_tag: NormTag = NormTag.PINF) -> DWitness:
    """Coarse-orbit branch first (cheaper), then the J branch."""
    w = coarse_orbit_contains(T, x, d, y, K, norm_tag)
    if w is not None:
        return DWitness("orbit", coarse=w)
    if T.is_backward_shift:
        try:
            jw = synthesize_shift_j_witness(T, x, y, d, schedule, norm_tag=norm_tag)
            return DWitness("limit", jwitness=jw)
        except SynthesisFailed:
            pass
    jw = search_j_witness(T, x, y, d, schedule, budget, norm_tag=norm_tag)
    return DWitness("limit", jwitness=jw)


# -- scale-family rescaling ----------------------------------------------------------


@dataclass(frozen=True)
class FamilyRescaleResult:
    witness: JWitness
    scale_index: int  # 1-based index m with d/t_m below target_eps
    scales_used: tuple[Fraction, ...]

    def to_jsonable(self):
        return {"witness": self.witness.to_jsonable(),
                "scale_index": self.scale_index,
                "scales_used": [str(t) for t in self.scales_used]}


def rescale_j_witness_family(T: ShiftOperator,
                             family: list[tuple[object, JWitness]],
                             target_eps) -> FamilyRescaleResult:
    """Re-index witnesses for t_k*y in J^mix(t_k*x, T, d) into one
    certificate for y at tolerance target_eps.

    Members with d/t_k below target_eps are divided by their scale and
    concatenated; output distances stay below d/t_m, and a strictly
    decreasing majorant schedule dominates the scaled radii.
    """
    if not family:
        raise OrbitscopeError("empty family")
    scales = [Fraction(t) if not isinstance(t, Fraction) else t for t, _ in family]
    for a, b in zip(scales, scales[1:]):
        if not b > a:
            raise OrbitscopeError("scales t_k must be strictly increasing")
    if scales[0] <= 0:
        raise OrbitscopeError("scales must be positive")
    witnesses = [w for _, w in family]
    mode = witnesses[0].target.mode
    d_val = witnesses[0].bound
    d_frac = d_val if isinstance(d_val, Fraction) else Fraction(d_val)
    eps_frac = Fraction(target_eps) if not isinstance(target_eps, Fraction) \
        else target_eps
    base = witnesses[0].base.scale(real_value(Fraction(1) / scales[0], mode))
    target = witnesses[0].target.scale(real_value(Fraction(1) / scales[0], mode))
    for t, w in family:
        w.verify(T)
        if to_float(w.bound) != to_float(d_val):
            raise OrbitscopeError("family members must share the bound d")
    m_index = None
    for idx, t in enumerate(scales):
        radius_bound = max(witnesses[idx].schedule.values) / t
        if d_frac / t < eps_frac and radius_bound < eps_frac:
            m_index = idx
            break
    if m_index is None:
        raise OrbitscopeError(
            f"family too short: need d/t_m < {eps_frac} with radii to match")
    out_triples = []
    radius_bounds = []
    prev_time = 0
    for idx in range(m_index, len(family)):
        t = scales[idx]
        w = witnesses[idx]
        inv = real_value(Fraction(1) / t, mode)
        for eps, triple in zip(w.schedule, w.triples):
            if triple.time <= prev_time:
                raise OrbitscopeError(
                    "family witness times must increase across members")
            prev_time = triple.time
            scaled_dist = triple.dist * (Fraction(1) / t) \
                if isinstance(triple.dist, Fraction) else to_float(triple.dist) / to_float(t)
            out_triples.append(JWitnessTriple(
                triple.perturbed.scale(inv), triple.time, scaled_dist))
            radius_bounds.append(eps / t)
    # strictly decreasing majorant of the per-triple radius bounds
    suffix_max = list(radius_bounds)
    for j in range(len(suffix_max) - 2, -1, -1):
        suffix_max[j] = max(suffix_max[j], suffix_max[j + 1])
    sched_vals = []
    for j, mj in enumerate(suffix_max):
        slack = 1 + Fraction(1, j + 2)
        sched_vals.append(slack * min(mj, eps_frac))
    schedule = EpsSchedule(tuple(sched_vals))
    times = [t.time for t in out_triples]
    consecutive = all(b == a + 1 for a, b in zip(times, times[1:]))
    all_mix = all(w.mix_flag for w in witnesses[m_index:])
    out = JWitness(base, target, real_value(d_frac / scales[m_index], mode),
                   witnesses[0].norm_tag, schedule, tuple(out_triples),
                   mix_flag=consecutive and all_mix,
                   op_label=witnesses[0].op_label)
    out.verify(T)
    return FamilyRescaleResult(out, m_index + 1, tuple(scales))


# -- geometric density amplification -------------------------------------------------


@dataclass(frozen=True)
class AmplifiedPoint:
    n: int
    time: int
    point: SeqVector
    distance: object
    bound: object

    def to_jsonable(self):
        return {"n": self.n, "time": self.time, "point": self.point.to_jsonable(),
                "distance": _num(self.distance), "bound": _num(self.bound)}


@dataclass(frozen=True)
class Prop22Amplification:
    lam: object
    points: tuple[AmplifiedPoint, ...]
    recurrence_times: tuple[int, ...]
    recurrence_tol: object | None

    def to_jsonable(self):
        return {"lambda": _num(self.lam),
                "points": [p.to_jsonable() for p in self.points],
                "recurrence_times": list(self.recurrence_times),
                "recurrence_tol": _num(self.recurrence_tol)}


def prop22_amplify(T: ShiftOperator, x: SeqVector, y: SeqVector, d, lam,
                   coarse_witnesses: list[CoarseWitness], *,
                   norm_tag: NormTag = NormTag.PINF,
                   recurrence: tuple[list[int], object] | None = None
                   ) -> Prop22Amplification:
    """Turn witnesses for (1/lam^n) y into points T^{k_n}(lam^n x) near y.

    By linearity the emitted distance at step n is exactly lam^n times
    the original achieved distance, hence below lam^n * d; both facts
    are re-verified numerically.
    """
    mode = x.mode if not x.is_zero else y.mode
    lam_frac = Fraction(lam) if not isinstance(lam, Fraction) else lam
    if not (0 < abs(lam_frac) < 1):
        raise OrbitscopeError("need 0 < |lambda| < 1")
    d_val = real_value(d, mode)
    out = []
    for n, w in enumerate(coarse_witnesses, start=1):
        w.verify(T)
        if w.base != x:
            raise OrbitscopeError(f"witness {n} has a different base point")
        if to_float(w.bound) != to_float(d_val):
            raise OrbitscopeError(f"witness {n} carries a different bound")
        lam_n = lam_frac ** n
        expected_target = y.scale(real_value(Fraction(1) / lam_n, mode))
        if w.target != expected_target:
            raise OrbitscopeError(
                f"witness {n} target is not (1/lambda^{n}) y")
        scaled_base = x.scale(real_value(lam_n, mode))
        point = apply_power(T, w.time, scaled_base)
        diff = point - y
        bound_n = real_value(abs(lam_n), mode) * d_val if mode is Mode.EXACT \
            else to_float(abs(lam_n)) * to_float(d_val)
        if not norm_lt(diff, norm_tag, bound_n):
            raise VerificationFailed(
                f"amplified point {n} missed the lam^n d bound")
        # linearity check: diff must be exactly lam^n times the original gap
        orig_diff = apply_power(T, w.time, x) - w.target
        expected = orig_diff.scale(real_value(lam_n, mode))
        if mode is Mode.EXACT:
            if diff != expected:
                raise VerificationFailed("amplified gap is not lam^n * original")
        else:
            gap = diff - expected
            scale = max(to_float(norm(diff, norm_tag)), 1.0)
            if to_float(norm(gap, norm_tag)) > 1e-9 * scale:
                raise VerificationFailed("amplified gap drifted past 1e-9 relative")
        out.append(AmplifiedPoint(n, w.time, point, norm(diff, norm_tag), bound_n))
    rec_times: tuple[int, ...] = ()
    rec_tol = None
    if recurrence is not None:
        times, tol = recurrence
        rec_tol = real_value(tol, mode)
        lam_s = real_value(lam_frac, mode)
        lx = x.scale(lam_s)
        for t in times:
            if not norm_lt(apply_power(T, t, x) - lx, norm_tag, rec_tol):
                raise VerificationFailed(
                    f"recurrence time {t}: T^t x is not within tol of lambda x")
        rec_times = tuple(times)
    return Prop22Amplification(real_value(lam_frac, mode), tuple(out),
                               rec_times, rec_tol)


# -- the quarter-tolerance contradiction checker -------------------------------------


@dataclass(frozen=True)
class ContradictionReport:
    """Two incompatible bounds on one coordinate of the claimed limit."""

    n0_index: int
    n1_index: int
    time_n0: int
    time_n1: int
    coordinate: int
    w_value: object
    bound_near_one_holds: bool
    bound_near_zero_holds: bool

    def to_jsonable(self):
        return {
            "n0_index": self.n0_index,
            "n1_index": self.n1_index,
            "time_n0": self.time_n0,
            "time_n1": self.time_n1,
            "coordinate": self.coordinate,
            "w_value": self.w_value,
            "bound_near_one_holds": self.bound_near_one_holds,
            "bound_near_zero_holds": self.bound_near_zero_holds,
        }


def derive_remark32_bounds(w: SeqVector, family: list[tuple[SeqVector, int]],
                           n0: int = 0, n1: int = 1) -> ContradictionReport:
    """Exhibit the incompatible coordinate bounds for a claimed family.

    For members n0 < n1 the two verified inequalities force both
    |w(-k_{n1}) - 1| < 1/2 and |w(-k_{n1})| < 1/2, an empty intersection.
    This derivation does not itself re-verify the family.
    """
    _, k0 = family[n0]
    _, k1 = family[n1]
    coord = -k1
    val = w.entry(coord)
    val_f = complex(to_float(_re(val)), to_float(_im(val)))
    near_one = abs(val_f - 1) < 0.5
    near_zero = abs(val_f) < 0.5
    return ContradictionReport(n0, n1, k0, k1, coord,
                               [val_f.real, val_f.imag], near_one, near_zero)


def _re(s):
    return s.re if isinstance(s, QC) else s.real


def _im(s):
    return s.im if isinstance(s, QC) else s.imag


def remark32_contradiction_check(T: ShiftOperator, candidate_w: SeqVector,
                                 family: list[tuple[SeqVector, int]], *,
                                 tol=Fraction(1, 4)) -> ContradictionReport:
    """Reject or contradict a claimed J(e_0, T, 1/4)-style witness family.

    The preconditions ||y_n - e_0|| < 1/4 and ||T^{k_n} y_n - w|| < 1/4
    are re-verified; failures raise InputNotAWitnessFamily (consistent
    with the limit set being empty).  A family passing them is reported
    with the two incompatible coordinate bounds it forces.
    """
    if len(family) < 2:
        raise InputNotAWitnessFamily(
            "need at least two members to exhibit the contradiction")
    times = [k for _, k in family]
    for a, b in zip(times, times[1:]):
        if not b > a:
            raise InputNotAWitnessFamily("times must be strictly increasing")
    if times[0] < 1:
        raise InputNotAWitnessFamily("times must be positive integers")
    mode = candidate_w.mode if not candidate_w.is_zero else family[0][0].mode
    e0 = SeqVector.basis(IndexSet.INTEGERS, 0, mode=mode)
    tol_val = real_value(tol, mode)
    failures = []
    for idx, (y_n, k_n) in enumerate(family):
        if not norm_lt(y_n - e0, NormTag.PINF, tol_val):
            failures.append((idx, "perturbation", to_float(norm(y_n - e0, NormTag.PINF))))
            continue
        image = apply_power(T, k_n, y_n)
        if not norm_lt(image - candidate_w, NormTag.PINF, tol_val):
            failures.append((idx, "image", to_float(norm(image - candidate_w, NormTag.PINF))))
    # the claim quantifies over a tail: locate the first index from which
    # every member verifies, and exhibit the pair at its head
    failed_idx = {f[0] for f in failures}
    n0 = len(family)
    while n0 > 0 and (n0 - 1) not in failed_idx:
        n0 -= 1
    if len(family) - n0 < 2:
        raise InputNotAWitnessFamily(
            "no verified tail of length >= 2 (consistent with an empty limit set)",
            failures=failures)
    report = derive_remark32_bounds(candidate_w, family, n0, n0 + 1)
    if report.bound_near_one_holds and report.bound_near_zero_holds:
        # both are implied by the verified inequalities yet exclude each
        # other; reaching this line means the arithmetic layer is broken
        raise VerificationFailed(
            "both incompatible bounds evaluated true; arithmetic inconsistency")
    return report
