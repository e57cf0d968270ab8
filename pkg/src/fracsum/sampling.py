"""Abscissa schedules: strictly increasing positive integers R_0 < R_1 < ...

Three kinds are supported: arithmetic progression sampling (APS) with
R_l = floor(kappa*l + eta), geometric progression sampling (GPS) with
R_0 = 1 and R_l = max(floor(tau*R_{l-1}), l+1), and explicit user lists.

Floor operations run on exact rationals.  Float parameters are taken at
their decimal repr (1.7 means 17/10, not the nearest binary double), so
floors at integer boundaries never depend on binary rounding.
"""

from __future__ import annotations

import math
import threading
import warnings
from decimal import Decimal
from fractions import Fraction

__all__ = [
    "Schedule",
    "make_aps",
    "make_gps",
    "make_explicit",
    "schedule_prefix",
    "parse_schedule",
]


def _exact(x, name: str) -> Fraction:
    try:
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        if isinstance(x, str):
            if "/" in x:
                return Fraction(x)
            return Fraction(Decimal(x))
        if isinstance(x, float):
            return Fraction(Decimal(str(x)))
    except (ValueError, ArithmeticError) as exc:
        raise ValueError(f"bad value {x!r} for {name}") from exc
    raise TypeError(f"{name} must be int, float, str or Fraction, got {type(x).__name__}")


class Schedule:
    """Immutable-after-construction integer schedule with memoized values."""

    def __init__(self, kind, *, kappa=None, eta=None, tau=None, values=None):
        self.kind = kind
        self.kappa = kappa
        self.eta = eta
        self.tau = tau
        self._values = list(values) if values is not None else None
        self._cache = [1] if kind == "gps" else []
        self._lock = threading.Lock()

    def prefix(self, count: int) -> list:
        """First *count* values; deterministic and idempotent."""
        if not isinstance(count, int) or count < 1:
            raise ValueError("count must be a positive integer")
        if self.kind == "aps":
            return [math.floor(self.kappa * l + self.eta) for l in range(count)]
        if self.kind == "gps":
            with self._lock:
                while len(self._cache) < count:
                    l = len(self._cache)
                    self._cache.append(max(math.floor(self.tau * self._cache[-1]), l + 1))
                return self._cache[:count]
        if count > len(self._values):
            raise ValueError(
                f"explicit schedule has only {len(self._values)} values, {count} requested"
            )
        return self._values[:count]

    def spec_string(self) -> str:
        if self.kind == "aps":
            return f"aps:{_fmt(self.kappa)},{_fmt(self.eta)}"
        if self.kind == "gps":
            return f"gps:{_fmt(self.tau)}"
        return "list:" + ",".join(str(v) for v in self._values)

    def __repr__(self):
        return f"Schedule({self.spec_string()!r})"


def _fmt(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    scaled = q * 10 ** 12
    if scaled.denominator == 1:
        return str(Decimal(q.numerator) / Decimal(q.denominator))
    return f"{q.numerator}/{q.denominator}"


def make_aps(kappa, eta) -> Schedule:
    """APS schedule R_l = floor(kappa*l + eta), kappa >= 1, eta >= 1."""
    kappa = _exact(kappa, "kappa")
    eta = _exact(eta, "eta")
    if kappa < 1:
        raise ValueError("kappa must be >= 1 (smaller values break strict ordering)")
    if eta < 1:
        raise ValueError("eta must be >= 1 (R_0 = floor(eta) must be >= 1)")
    return Schedule("aps", kappa=kappa, eta=eta)


def make_gps(tau) -> Schedule:
    """GPS schedule R_0 = 1, R_l = max(floor(tau*R_{l-1}), l+1), 1 < tau <= 2."""
    tau = _exact(tau, "tau")
    if tau <= 1:
        raise ValueError("tau must be > 1 (the schedule would stall)")
    if tau > 2:
        warnings.warn(
            "tau > 2 lies outside the recommended range (1, 2]; "
            "term consumption grows very quickly",
            stacklevel=2,
        )
    return Schedule("gps", tau=tau)


def make_explicit(values) -> Schedule:
    """Explicit schedule; values are validated, not trusted."""
    values = list(values)
    if not values:
        raise ValueError("explicit schedule must be nonempty")
    for v in values:
        if not isinstance(v, int) or v < 1:
            raise ValueError(f"schedule values must be positive integers, got {v!r}")
    for a, b in zip(values, values[1:]):
        if b <= a:
            raise ValueError(f"schedule must be strictly increasing, got {a} then {b}")
    return Schedule("explicit", values=values)


def schedule_prefix(schedule: Schedule, count: int) -> list:
    """First *count* values of *schedule* (module-level convenience form)."""
    return schedule.prefix(count)


def parse_schedule(text: str) -> Schedule:
    """Parse CLI syntax: ``aps:KAPPA,ETA``, ``gps:TAU``, ``list:1,2,4,8``."""
    kind, sep, rest = text.partition(":")
    if not sep:
        raise ValueError(f"bad schedule spec {text!r}: expected kind:params")
    kind = kind.strip().lower()
    if kind == "aps":
        parts = rest.split(",")
        if len(parts) != 2:
            raise ValueError(f"bad APS spec {text!r}: expected aps:KAPPA,ETA")
        return make_aps(parts[0].strip(), parts[1].strip())
    if kind == "gps":
        return make_gps(rest.strip())
    if kind == "list":
        try:
            values = [int(p) for p in rest.split(",") if p.strip()]
        except ValueError:
            raise ValueError(f"bad list spec {text!r}: entries must be integers") from None
        return make_explicit(values)
    raise ValueError(f"unknown schedule kind {kind!r} (expected aps, gps or list)")
