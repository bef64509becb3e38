"""Exception types shared across the package."""


class OrbitscopeError(Exception):
    """Base class for all package errors."""


class IndexSetMismatch(OrbitscopeError):
    """Vectors or operators over N were combined with ones over Z."""


class NormMismatch(OrbitscopeError):
    """Two objects carrying different norm tags were combined."""


class ModeMismatch(OrbitscopeError):
    """Exact-rational and float64 values were mixed in one computation."""


class NumericOverflow(OrbitscopeError):
    """A float64-mode magnitude exceeded the overflow policy (log2 > 900)."""


class IndecisiveSpectrum(OrbitscopeError):
    """A block's spectral radius estimate is too close to 1 to classify."""


class VerificationFailed(OrbitscopeError):
    """A witness failed its independent re-check; signals an arithmetic bug."""


class SynthesisFailed(OrbitscopeError):
    """Shift witness synthesis hit its time cap without meeting the bounds."""

    def __init__(self, message, *, k_cap, best_delta_norm, best_residual, triple_index):
        super().__init__(message)
        self.k_cap = k_cap
        self.best_delta_norm = best_delta_norm
        self.best_residual = best_residual
        self.triple_index = triple_index


class SearchFailed(OrbitscopeError):
    """Witness search gave up; never a proof of non-membership.

    ``reason`` is one of ``budget``, ``k-cap``, ``stagnation``,
    ``decay-bound``, ``collapse-bound``.  ``collapse_norm`` records the
    smallest norm of a fully back-solved perturbed point seen while
    scanning, when one was computable.
    """

    def __init__(self, message, *, reason, triple_index, best_residual,
                 best_delta_norm, collapse_norm, attempts, budget_used, k_last):
        super().__init__(message)
        self.reason = reason
        self.triple_index = triple_index
        self.best_residual = best_residual
        self.best_delta_norm = best_delta_norm
        self.collapse_norm = collapse_norm
        self.attempts = attempts
        self.budget_used = budget_used
        self.k_last = k_last

    @property
    def exhausted(self):
        return self.reason == "budget"

    def diagnostics(self):
        return {
            "reason": self.reason,
            "triple_index": self.triple_index,
            "best_residual": self.best_residual,
            "best_delta_norm": self.best_delta_norm,
            "collapse_norm": self.collapse_norm,
            "attempts": self.attempts,
            "budget_used": self.budget_used,
            "k_last": self.k_last,
        }


class InputNotAWitnessFamily(OrbitscopeError):
    """A claimed witness family failed its stated preconditions."""

    def __init__(self, message, failures=None):
        super().__init__(message)
        self.failures = failures or []


class ConfigError(OrbitscopeError):
    """Invalid run configuration or CLI input."""
