"""Closed-form threshold mathematics.

Everything here is elementary arithmetic on the outputs of the counting
sweep: the effective pair coefficient that folds the cubic term into the
quadratic one, the acceptance-conditioning adjustment, the per-level
failure recursion and its consequences for accuracy and overhead, the
generalization to codes correcting t errors, and the local (non-Markovian)
noise bounds with their inclusion-exclusion counting identity.

Binomials are exact integers; everything else is floating point with
relative accuracy far beyond the published 4-5 significant figures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations


@dataclass(frozen=True)
class ThresholdInputs:
    A: float                 # malignant-pair count (or weighted mass)
    B: int                   # three-subset count of the exRec
    C_anc: float             # locations per ancilla preparation/verification
    acceptance_exponent: int  # independently verified ancillas per exRec


@dataclass(frozen=True)
class ThresholdResult:
    A: float
    B: int
    a_prime: float
    a_double_prime: float
    eps0: float


def a_prime(A: float, B: float) -> float:
    """Effective pair coefficient: the closed form of A' = A + B/A'."""
    if A <= 0:
        raise ValueError("need a positive malignant-pair count")
    if B < 0:
        raise ValueError("negative three-subset count")
    return 0.5 * A * (1.0 + math.sqrt(1.0 + 4.0 * B / (A * A)))


def bayes_adjust(a_pr: float, C_anc: float, exponent: int) -> float:
    """Condition the failure bound on all ancillas being accepted.

    Each of the ``exponent`` independently prepared ancillas passes
    verification with probability at least 1 - C_anc * eps, so the joint
    bound divides by (1 - C_anc/A')^exponent.
    """
    if C_anc >= a_pr:
        raise ValueError("acceptance bound is vacuous: C_anc >= A'")
    return (1.0 - C_anc / a_pr) ** (-exponent) * a_pr


def threshold_pipeline(inputs: ThresholdInputs) -> ThresholdResult:
    ap = a_prime(inputs.A, inputs.B)
    app = bayes_adjust(ap, inputs.C_anc, inputs.acceptance_exponent)
    return ThresholdResult(A=inputs.A, B=inputs.B, a_prime=ap,
                           a_double_prime=app, eps0=1.0 / app)


def eps_level_k(eps: float, eps0: float, k: int) -> float:
    """Failure bound after k levels: eps0 * (eps/eps0)^(2^k)."""
    if eps < 0 or eps0 <= 0:
        raise ValueError("rates must be nonnegative, threshold positive")
    if k < 0:
        raise ValueError("level must be nonnegative")
    return eps0 * (eps / eps0) ** (2 ** k)


def accuracy_and_level(L: int, delta_target: float, eps: float, eps0: float,
                       max_k: int = 64) -> tuple[float, int]:
    """Accuracy bound and the minimal concatenation level achieving it.

    Returns (delta at that level, minimal k with 2*eps0*L*(eps/eps0)^(2^k)
    <= delta_target).  The search scans k directly, avoiding logarithm
    rounding at the boundary.
    """
    if eps >= eps0:
        raise ValueError("no finite level suffices at or above threshold")
    for k in range(max_k + 1):
        delta = 2.0 * eps0 * L * (eps / eps0) ** (2 ** k)
        if delta <= delta_target:
            return delta, k
    raise ValueError(f"not reachable within {max_k} levels")


def overhead(L: int, D: int, ell: int, d: int, k: int) -> tuple[int, int]:
    """Exact recursive-substitution circuit size and depth: L*ell^k, D*d^k."""
    if ell < 1 or d < 1:
        raise ValueError("rectangle size and depth must be at least 1")
    return L * ell ** k, D * d ** k


def eps0_t(A_t: float, t: int) -> float:
    """Threshold for a code correcting t errors: A_t^(-1/t),
    with A_t the count of (t+1)-subsets (or malignant sets)."""
    if t < 1 or A_t <= 0:
        raise ValueError("need t >= 1 and a positive count")
    return A_t ** (-1.0 / t)


def eps_level_k_t(eps: float, eps0: float, t: int, k: int) -> float:
    """t-error generalization of the per-level bound."""
    return eps0 * (eps / eps0) ** ((t + 1) ** k)


# --- local non-Markovian noise ---------------------------------------------------


def fault_path_tail(A: int, s: int, eta: float) -> float:
    """Norm bound on the sum over fault paths with s or more faults."""
    if not 0 <= s <= A:
        raise ValueError("need 0 <= s <= A")
    if eta < 0:
        raise ValueError("noise strength must be nonnegative")
    return math.comb(A, s) * eta ** s * math.exp((A - s) * eta)


def exact_fault_tail(bad: list[float], s: int) -> float:
    """Scalar-model tail: sum over fault sets of size >= s of the product
    of bad-part magnitudes (good parts normalized to 1)."""
    A = len(bad)
    total = 0.0
    for r in range(s, A + 1):
        for subset in combinations(range(A), r):
            prod = 1.0
            for i in subset:
                prod *= bad[i]
            total += prod
    return total


def verify_inclusion_exclusion(bad: list[float], s: int,
                               rel_tol: float = 1e-9) -> bool:
    """Check the fault-path counting identity on a scalar model.

    The direct tail sum must equal
    sum_r (-1)^(r-s) C(r-1, s-1) E_r with
    E_r = sum_{|I|=r} prod_{i in I} b_i * prod_{i not in I} (1 + b_i).
    """
    A = len(bad)
    if A > 20:
        raise ValueError("desk-scale check: at most 20 locations")
    if not 1 <= s <= A:
        raise ValueError("need 1 <= s <= A")
    direct = exact_fault_tail(bad, s)
    alternating = 0.0
    for r in range(s, A + 1):
        e_r = 0.0
        for subset in combinations(range(A), r):
            chosen = set(subset)
            prod = 1.0
            for i in range(A):
                prod *= bad[i] if i in chosen else 1.0 + bad[i]
            e_r += prod
        alternating += (-1.0) ** (r - s) * math.comb(r - 1, s - 1) * e_r
    return math.isclose(direct, alternating, rel_tol=rel_tol, abs_tol=1e-12)


def local_noise_threshold(A: int, s: int, C_const: float = math.e,
                          self_consistent: bool = False,
                          tol: float = 1e-12, max_iter: int = 100) -> float:
    """Threshold noise amplitude: eta0 = (C * C(A, s))^(-1/(s-1)).

    With ``self_consistent`` the constant is tightened to
    C = exp((A - s) * eta0) by fixed-point iteration.
    """
    if s < 2:
        raise ValueError("need s >= 2")
    if C_const < 1:
        raise ValueError("the constant must be at least 1")
    binom = math.comb(A, s)
    eta = (C_const * binom) ** (-1.0 / (s - 1))
    if not self_consistent:
        return eta
    for _ in range(max_iter):
        new = (math.exp((A - s) * eta) * binom) ** (-1.0 / (s - 1))
        if abs(new - eta) <= tol * eta:
            return new
        eta = new
    raise RuntimeError("self-consistent threshold did not converge")


def local_noise_pair_level1(B_pairs: float, A: int, eta: float,
                            C_const: float = math.e) -> float:
    """Level-1 effective noise with malignant-pair counting:
    B*eta^2 + (C+1)*C(A,3)*eta^3."""
    if eta < 0:
        raise ValueError("noise strength must be nonnegative")
    return B_pairs * eta ** 2 + (C_const + 1.0) * math.comb(A, 3) * eta ** 3


def decoherence_interpolation(M: float, N: float) -> float:
    """Interpolated threshold 1/(e*M*sqrt(N)) between fully coherent
    (N=1, M=A) and decohered (N=A, M=1) fault-path accounting."""
    if M < 1 or N < 1:
        raise ValueError("class parameters must be at least 1")
    return 1.0 / (math.e * M * math.sqrt(N))
