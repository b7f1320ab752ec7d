"""Computer-assisted d2 certificate for Quicksort.

The ledger runs the recursive upper bound ``abar_n >= d2(Y_n, Y)``::

    abar_n^2 = 2 sigma (n+1)/n^2 * Vbar_{n-1} + 2 sigma^2/(3n) + b_n^2
               + 2 (n+1)/n^2 * W_{n-1}

with running sums ``Vbar_n = sum_{k<=n} k abar_k / ((k+1)(k+2))`` and
``W_n = sum_{k<=n} k^2 b_k^2 / ((k+1)(k+2))``.  Past the ledger horizon
``N`` a coefficient ``A`` with ``a_k <= A / sqrt(k)`` is refined to::

    A_N = sqrt(2 sigma Vbar_N + 4 sigma A / sqrt(N+2) + 2 sigma^2/3
               + 2 W_N + 2 B / (N+2)),   B = (3 + 2 pi / sqrt 3)^2
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath

from .constants import MP_DPS, SIGMA2_MP, SIGMA_MP, TOLL_COEF_SQ_MP
from .toll import b_n_exact

__all__ = [
    "LedgerRow",
    "BoundLedger",
    "InvalidCoefficientError",
    "CertificationError",
    "build_ledger",
    "build_ledger_direct",
    "partial_sums",
    "refine_constant",
    "closure_holds",
    "certify_d2",
    "D2Certificate",
]

SEED_COEFFICIENT = 8


class InvalidCoefficientError(ValueError):
    """The proposed coefficient ``A`` does not bound the ledger."""

    def __init__(self, A, k, value):
        super().__init__(f"A={A} fails at k={k}: sqrt(k) * abar_k = {value} > A")
        self.A, self.k, self.value = A, k, value


class CertificationError(RuntimeError):
    """A checked inequality in the certificate pipeline failed."""


@dataclass(frozen=True)
class LedgerRow:
    n: int
    b_n_squared: mpmath.mpf
    abar: mpmath.mpf

    @property
    def scaled(self):
        """``sqrt(n) * abar_n``."""
        return mpmath.sqrt(self.n) * self.abar


@dataclass
class BoundLedger:
    rows: list[LedgerRow] = field(default_factory=list)
    Vbar: list = field(default_factory=list)
    W: list = field(default_factory=list)

    @property
    def N(self) -> int:
        return len(self.rows)

    def row(self, n: int) -> LedgerRow:
        return self.rows[n - 1]

    def max_scaled(self, upto: int | None = None):
        upto = upto or self.N
        return max(r.scaled for r in self.rows[:upto])

    def to_csv_rows(self):
        yield ("n", "b_n", "abar_n", "sqrt_n_abar_n")
        for r in self.rows:
            yield (r.n, float(mpmath.sqrt(r.b_n_squared)), float(r.abar), float(r.scaled))


def build_ledger(N: int, dps: int = MP_DPS) -> BoundLedger:
    """Rows ``1..N`` of the ledger, each ``abar_n`` from earlier rows only."""
    if N < 1:
        raise ValueError("N must be positive")
    ledger = BoundLedger()
    with mpmath.workdps(dps):
        sigma, sigma2 = +SIGMA_MP, +SIGMA2_MP
        vbar = mpmath.mpf(0)
        w = mpmath.mpf(0)
        for n in range(1, N + 1):
            b2 = b_n_exact(n, dps).b_n_squared
            coef = mpmath.mpf(n + 1) / (n * n)
            abar = mpmath.sqrt(2 * sigma * coef * vbar + 2 * sigma2 / (3 * n) + b2 + 2 * coef * w)
            weight = mpmath.mpf(1) / ((n + 1) * (n + 2))
            vbar += n * abar * weight
            w += n * n * b2 * weight
            ledger.rows.append(LedgerRow(n, b2, abar))
            ledger.Vbar.append(vbar)
            ledger.W.append(w)
    return ledger


def build_ledger_direct(N: int, dps: int = MP_DPS) -> list:
    """``abar_n`` from the unwrapped recursive estimate::

        abar_n^2 = 2/n^3 sum k^2 abar_k^2 + 2 sigma/n^3 sum k abar_k
                   + 2 sigma^2/(3 n^2) + b_n^2

    Used to cross-check :func:`build_ledger`, which solves the same
    recursion in closed form.
    """
    out = []
    with mpmath.workdps(dps):
        s2 = mpmath.mpf(0)
        s1 = mpmath.mpf(0)
        for n in range(1, N + 1):
            b2 = b_n_exact(n, dps).b_n_squared
            n3 = mpmath.mpf(n) ** 3
            abar = mpmath.sqrt(2 * s2 / n3 + 2 * SIGMA_MP * s1 / n3 + 2 * SIGMA2_MP / (3 * n * n) + b2)
            s2 += n * n * abar * abar
            s1 += n * abar
            out.append(abar)
    return out


def partial_sums(ledger: BoundLedger, N: int) -> tuple:
    """``(Vbar_N, W_N)``."""
    if not 1 <= N <= ledger.N:
        raise ValueError(f"ledger covers 1..{ledger.N}, asked for N={N}")
    return ledger.Vbar[N - 1], ledger.W[N - 1]


def _refine(N, A, ledger):
    vbar, w = partial_sums(ledger, N)
    s, s2 = SIGMA_MP, SIGMA2_MP
    return mpmath.sqrt(
        2 * s * vbar
        + 4 * s * A / mpmath.sqrt(N + 2)
        + 2 * s2 / 3
        + 2 * w
        + 2 * TOLL_COEF_SQ_MP / (N + 2)
    )


def closure_holds(A) -> bool:
    """Analytic induction step ``2^{3/2} sigma A + 45 <= A^2``."""
    A = mpmath.mpf(A)
    return 2 * mpmath.sqrt(2) * SIGMA_MP * A + 45 <= A * A


def refine_constant(N: int, A, ledger: BoundLedger):
    """Refined coefficient ``A_N`` for a valid global coefficient ``A``.

    ``A`` is valid when ``sqrt(k) abar_k <= A`` for ``k <= N`` and the
    induction past ``N`` closes, either analytically or because
    ``A_N(A) <= A``.

    Raises
    ------
    InvalidCoefficientError
        On the first ledger row violating ``sqrt(k) abar_k <= A``, or with
        ``k = N + 1`` when the tail induction does not close.
    """
    A = mpmath.mpf(A)
    for r in ledger.rows[:N]:
        if r.scaled > A:
            raise InvalidCoefficientError(float(A), r.n, float(r.scaled))
    refined = _refine(N, A, ledger)
    if refined > A and not closure_holds(A):
        raise InvalidCoefficientError(float(A), N + 1, float(refined))
    return refined


@dataclass
class D2Certificate:
    N: int
    seed_A: float
    iterations: list
    Vbar_N: float
    W_N: float
    final_A: float
    checks: list

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "seed_A": self.seed_A,
            "iterations": self.iterations,
            "Vbar_N": self.Vbar_N,
            "W_N": self.W_N,
            "final_A": self.final_A,
            "checks": self.checks,
        }


def _round_up(x, step):
    return math.ceil(float(x) / step - 1e-12) * step


def certify_d2(
    N: int = 100,
    seed_A: float = SEED_COEFFICIENT,
    step: float | None = 0.01,
    tol: float = 1e-6,
    max_iter: int = 20,
    ledger: BoundLedger | None = None,
) -> D2Certificate:
    """Certify ``d2(Y_n, Y) <= A_final / sqrt(n)`` for every ``n >= 1``.

    Starting from ``seed_A`` (valid by the analytic closure), each round
    refines the current coefficient and carries forward
    ``max(A_N, max_k sqrt(k) abar_k)``, rounded up to a multiple of
    ``step`` when given.  Rounding up only weakens the hypothesis and keeps
    the two-decimal values used by hand.  Every inequality used is
    recorded in ``checks`` with its margin.
    """
    if N < 1:
        raise ValueError("N must be positive")
    ledger = ledger if ledger is not None and ledger.N >= N else build_ledger(N)
    checks = []

    def check(name, lhs, rhs):
        lhs, rhs = float(lhs), float(rhs)
        ok = lhs <= rhs
        checks.append({"name": name, "lhs": lhs, "rhs": rhs, "margin": rhs - lhs, "passed": ok})
        if not ok:
            raise CertificationError(f"{name}: {lhs} > {rhs}")

    A = mpmath.mpf(seed_A)
    check("closure 2^(3/2) sigma A + 45 <= A^2", 2 * mpmath.sqrt(2) * SIGMA_MP * A + 45, A * A)
    ledger_max = ledger.max_scaled(N)
    iterations = []
    refined = None
    for _ in range(max_iter):
        for r in ledger.rows[:N]:
            check(f"sqrt({r.n}) abar_{r.n} <= A", r.scaled, A)
        refined = refine_constant(N, A, ledger)
        iterations.append({"A_in": float(A), "A_out": float(refined)})
        nxt = max(refined, ledger_max)
        if step:
            nxt = mpmath.mpf(_round_up(nxt, step))
        if abs(nxt - A) < tol or nxt >= A:
            break
        A = nxt
    # the last refined value closes on itself and bounds the ledger
    final = max(refined, ledger_max)
    check("A_N(A_final) <= A_final", _refine(N, final, ledger), final)
    check("max_k sqrt(k) abar_k <= A_final", ledger_max, final)
    vbar, w = partial_sums(ledger, N)
    return D2Certificate(N, float(seed_A), iterations, float(vbar), float(w), float(final), checks)
