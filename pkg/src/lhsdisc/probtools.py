"""Exact distribution kernels and machine checks of the supporting bounds.

The checks certify, on enumerable instances, four facts the witness
construction relies on:

* the total variation distance between sampling without replacement
  (hypergeometric H(N, W, n)) and with replacement (binomial B(n, p),
  p = W/N) is squeezed between (1/28)(n-1)/(N-1) and (n-1)/(N-1)
  whenever n p (1-p) >= 1;
* for n >= 16 and 1/n <= p <= 1/4 the binomial lower tail
  B(n,p)([0, np - sqrt(np)/2]) is at least 3/160;
* sums of independent Bernoulli variables obey the exponential lower-tail
  bound exp(-2 t^2 k);
* dependent Bernoulli variables whose conditional success probability
  never drops below q have partial sums stochastically dominating the
  iid Bernoulli(q) sums (checked by exhaustive path enumeration).

All probability masses are computed in log space with a single
exponentiation per value, which stays finite at large parameters; CDFs
are direct sums from the nearest tail, clamped to [0, 1].
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .rng import Stream, derive

#: Acceptable departure of a probability vector from total mass 1.
MASS_TOL = 1e-12


class DomainError(ValueError):
    """Arguments outside the mathematical domain of an operation."""


class HypothesisNotMet(ValueError):
    """Instance fails the hypothesis of the bound being checked."""


class DepthExceeded(ValueError):
    """Tree enumeration past the 2^k guard."""


class InvariantViolated(ValueError):
    """A conditional-probability node sits below the declared floor."""


@dataclass(frozen=True)
class DiscreteDistribution:
    """Probability mass on consecutive integers offset, offset+1, ..."""

    offset: int
    probs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.probs, dtype=np.float64, copy=True)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("probs must be a non-empty vector")
        if np.any(arr < -MASS_TOL):
            raise ValueError("negative probability mass")
        if abs(float(arr.sum()) - 1.0) > MASS_TOL:
            raise ValueError(f"mass sums to {arr.sum()!r}, not 1 within {MASS_TOL}")
        arr.flags.writeable = False
        object.__setattr__(self, "probs", arr)

    def pmf(self, k: int) -> float:
        i = k - self.offset
        if 0 <= i < self.probs.size:
            return float(self.probs[i])
        return 0.0

    def cdf(self, k: int) -> float:
        i = k - self.offset
        if i < 0:
            return 0.0
        if i >= self.probs.size - 1:
            return 1.0
        return min(1.0, float(self.probs[: i + 1].sum()))


@dataclass
class CheckReport:
    """Outcome of one numeric bound check."""

    name: str
    params: dict = field(default_factory=dict)
    computed: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    passed: bool = True
    margin: float = math.inf

    def lines(self) -> list[str]:
        out = [f"check = {self.name}"]
        for label, mapping in (("param", self.params), ("computed", self.computed),
                               ("bound", self.bounds)):
            for key, val in mapping.items():
                out.append(f"{label} {key} = {val}")
        out.append(f"margin = {self.margin}")
        out.append(f"result = {'PASS' if self.passed else 'FAIL'}")
        return out


@functools.lru_cache(maxsize=1 << 16)
def log_choose(n: int, k: int) -> float:
    """log of the binomial coefficient C(n, k).

    Uses log-gamma when both k and n-k are large; for small min(k, n-k)
    the difference of two ~n log n sized log-gammas cancels almost
    completely and costs relative accuracy, so there the result is an
    exactly-rounded sum (math.fsum) of the 2 min(k, n-k) individual logs.
    Relative error stays below 1e-12 through n = 10**6.
    """
    if k < 0 or n < 0 or k > n:
        raise DomainError(f"log_choose needs 0 <= k <= n, got n={n}, k={k}")
    m = min(k, n - k)
    if m == 0:
        return 0.0
    if m <= 10_000:
        terms = [math.log(n - m + i) for i in range(1, m + 1)]
        terms += [-math.log(i) for i in range(2, m + 1)]
        return math.fsum(terms)
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def binom_pmf(n: int, p: float, k: int) -> float:
    if n < 0 or not 0.0 <= p <= 1.0:
        raise DomainError(f"binom_pmf needs n >= 0 and p in [0,1], got n={n}, p={p}")
    if k < 0 or k > n:
        return 0.0
    if p == 0.0:
        return 1.0 if k == 0 else 0.0
    if p == 1.0:
        return 1.0 if k == n else 0.0
    return math.exp(log_choose(n, k) + k * math.log(p) + (n - k) * math.log1p(-p))


def binom_cdf(n: int, p: float, k: int) -> float:
    if n < 0 or not 0.0 <= p <= 1.0:
        raise DomainError(f"binom_cdf needs n >= 0 and p in [0,1], got n={n}, p={p}")
    if k < 0:
        return 0.0
    if k >= n:
        return 1.0
    if k + 1 <= n - k:
        total = sum(binom_pmf(n, p, i) for i in range(k + 1))
    else:
        total = 1.0 - sum(binom_pmf(n, p, i) for i in range(k + 1, n + 1))
    return min(1.0, max(0.0, total))


def _hyper_support(n_total: int, n_white: int, n_draws: int) -> tuple[int, int]:
    return max(0, n_draws - (n_total - n_white)), min(n_draws, n_white)


def hypergeom_pmf(n_total: int, n_white: int, n_draws: int, k: int) -> float:
    """Mass of k white balls when drawing n without replacement from N with W white."""
    if not (0 <= n_white <= n_total and 0 <= n_draws <= n_total):
        raise DomainError(
            f"hypergeom_pmf needs 0 <= W, n <= N, got N={n_total}, W={n_white}, n={n_draws}"
        )
    lo, hi = _hyper_support(n_total, n_white, n_draws)
    if k < lo or k > hi:
        return 0.0
    return math.exp(
        log_choose(n_white, k)
        + log_choose(n_total - n_white, n_draws - k)
        - log_choose(n_total, n_draws)
    )


def hypergeom_cdf(n_total: int, n_white: int, n_draws: int, k: int) -> float:
    lo, hi = _hyper_support(n_total, n_white, n_draws)
    if k < lo:
        return 0.0
    if k >= hi:
        return 1.0
    if k - lo + 1 <= hi - k:
        total = sum(hypergeom_pmf(n_total, n_white, n_draws, i) for i in range(lo, k + 1))
    else:
        total = 1.0 - sum(hypergeom_pmf(n_total, n_white, n_draws, i) for i in range(k + 1, hi + 1))
    return min(1.0, max(0.0, total))


def binom_distribution(n: int, p: float) -> DiscreteDistribution:
    return DiscreteDistribution(0, np.array([binom_pmf(n, p, k) for k in range(n + 1)]))


def hypergeom_distribution(n_total: int, n_white: int, n_draws: int) -> DiscreteDistribution:
    lo, hi = _hyper_support(n_total, n_white, n_draws)
    probs = np.array([hypergeom_pmf(n_total, n_white, n_draws, k) for k in range(lo, hi + 1)])
    return DiscreteDistribution(lo, probs)


def tv_distance(a: DiscreteDistribution, b: DiscreteDistribution) -> float:
    """Total variation distance: half the L1 distance over the union support
    (equal to the max over subsets of the probability difference)."""
    lo = min(a.offset, b.offset)
    hi = max(a.offset + a.probs.size, b.offset + b.probs.size)
    pa = np.zeros(hi - lo)
    pb = np.zeros(hi - lo)
    pa[a.offset - lo : a.offset - lo + a.probs.size] = a.probs
    pb[b.offset - lo : b.offset - lo + b.probs.size] = b.probs
    return 0.5 * float(np.abs(pa - pb).sum())


def check_theorem3(n_total: int, n_white: int, n_draws: int) -> CheckReport:
    """TV distance between H(N, W, n) and B(n, W/N) against its envelope.

    Requires p = W/N in (0, 1) and n p (1-p) >= 1; then checks
    (1/28)(n-1)/(N-1) <= delta <= (n-1)/(N-1) with 1e-12 slack.
    """
    if not (0 <= n_white <= n_total and 1 <= n_draws <= n_total):
        raise DomainError(
            f"need 0 <= W <= N and 1 <= n <= N, got N={n_total}, W={n_white}, n={n_draws}"
        )
    p = n_white / n_total
    if not 0.0 < p < 1.0:
        raise HypothesisNotMet(f"p = W/N = {p} not in (0, 1)")
    npq = n_draws * p * (1.0 - p)
    if npq < 1.0:
        raise HypothesisNotMet(f"n p (1-p) = {npq} < 1")

    delta = tv_distance(
        hypergeom_distribution(n_total, n_white, n_draws),
        binom_distribution(n_draws, p),
    )
    upper = (n_draws - 1) / (n_total - 1)
    lower = upper / 28.0
    passed = (lower - MASS_TOL <= delta) and (delta <= upper + MASS_TOL)
    return CheckReport(
        name="theorem3",
        params={"N": n_total, "W": n_white, "n": n_draws, "p": p},
        computed={"delta": delta},
        bounds={"lower": lower, "upper": upper},
        passed=passed,
        margin=min(delta - lower, upper - delta),
    )


def check_lemma4(n: int, p: float) -> CheckReport:
    """Binomial mass of [0, np - sqrt(np)/2] against the floor 3/160.

    Requires n >= 16 and 1/n <= p <= 1/4.
    """
    if n < 16:
        raise HypothesisNotMet(f"need n >= 16, got {n}")
    if not (1.0 / n <= p <= 0.25):
        raise HypothesisNotMet(f"need 1/n <= p <= 1/4, got p = {p} at n = {n}")
    mean = n * p
    cutoff = mean - math.sqrt(mean) / 2.0
    mass = binom_cdf(n, p, math.floor(cutoff))
    floor = 3.0 / 160.0
    return CheckReport(
        name="lemma4",
        params={"n": n, "p": p},
        computed={"cutoff": cutoff, "mass": mass},
        bounds={"floor": floor},
        passed=mass >= floor - MASS_TOL,
        margin=mass - floor,
    )


def hoeffding_bound(k: int, t: float) -> float:
    """exp(-2 t^2 k): tail bound for a centered sum of k Bernoulli variables."""
    return math.exp(-2.0 * t * t * k)


def check_theorem5_binomial(k: int, q: float, t: float) -> CheckReport:
    """Exact iid-Bernoulli lower tail P(sum < kq - tk) against exp(-2 t^2 k)."""
    if k < 1 or not 0.0 < q < 1.0 or t <= 0.0:
        raise DomainError(f"need k >= 1, q in (0,1), t > 0, got k={k}, q={q}, t={t}")
    cut = k * q - t * k
    tail = binom_cdf(k, q, math.ceil(cut) - 1)  # strict: sum < cut
    bound = hoeffding_bound(k, t)
    return CheckReport(
        name="theorem5",
        params={"k": k, "q": q, "t": t},
        computed={"tail": tail},
        bounds={"hoeffding": bound},
        passed=tail <= bound + MASS_TOL,
        margin=bound - tail,
    )


class ConditionalBernoulliTree:
    """Bernoulli variables eta_1..eta_k with history-dependent success rates.

    Level j holds one success probability per history v in {0,1}^(j-1),
    indexed by the integer whose bit i-1 is v_i (v_1 is the least
    significant bit).  q_floor is the declared lower bound all node
    probabilities are supposed to respect.
    """

    MAX_DEPTH = 20

    def __init__(self, levels: Sequence[np.ndarray], q_floor: float):
        if not 0.0 < q_floor < 1.0:
            raise ValueError(f"q_floor must lie in (0, 1), got {q_floor}")
        if len(levels) > self.MAX_DEPTH:
            raise DepthExceeded(f"depth {len(levels)} exceeds guard {self.MAX_DEPTH}")
        self.levels = []
        for j, level in enumerate(levels, start=1):
            arr = np.asarray(level, dtype=np.float64)
            if arr.shape != (2 ** (j - 1),):
                raise ValueError(
                    f"level {j} must have {2 ** (j - 1)} nodes, got shape {arr.shape}"
                )
            if np.any((arr < 0.0) | (arr > 1.0)):
                raise ValueError(f"level {j} has probabilities outside [0, 1]")
            self.levels.append(arr)
        self.q_floor = q_floor

    @property
    def depth(self) -> int:
        return len(self.levels)

    def verify_floor(self) -> None:
        for j, level in enumerate(self.levels, start=1):
            if np.any(level < self.q_floor):
                h = int(np.argmax(level < self.q_floor))
                raise InvariantViolated(
                    f"node (level {j}, history {h}) = {level[h]} below floor {self.q_floor}"
                )

    @classmethod
    def independent(cls, depth: int, q: float) -> "ConditionalBernoulliTree":
        return cls([np.full(2 ** (j - 1), q) for j in range(1, depth + 1)], q)

    @classmethod
    def random(cls, depth: int, q: float, seed: int) -> "ConditionalBernoulliTree":
        """Node probabilities uniform on [q, 1], seeded and reproducible."""
        stream = Stream(derive(seed, "lemma6-tree"))
        levels = [q + (1.0 - q) * stream.uniform_block(2 ** (j - 1))
                  for j in range(1, depth + 1)]
        return cls(levels, q)


def tree_sum_distribution(tree: ConditionalBernoulliTree, j: int) -> DiscreteDistribution:
    """Exact law of eta_1 + ... + eta_j by summing all 2^j path probabilities."""
    if not 1 <= j <= tree.depth:
        raise DepthExceeded(f"need 1 <= j <= depth ({tree.depth}), got {j}")
    path = np.ones(1)
    for level in tree.levels[:j]:
        # First half: next bit 0, second half: next bit 1 (bit j-1 of the index).
        path = np.concatenate([path * (1.0 - level), path * level])
    popcounts = np.array([bin(h).count("1") for h in range(2**j)])
    probs = np.bincount(popcounts, weights=path, minlength=j + 1)
    return DiscreteDistribution(0, probs)


def check_lemma6(tree: ConditionalBernoulliTree) -> CheckReport:
    """CDF dominance of every partial sum by the iid Bernoulli(q) sum.

    Sums are integer valued, so checking integer thresholds t = 1..j
    covers all real t > 0.  Rejects the tree up front if any node
    probability sits below the floor.
    """
    tree.verify_floor()
    q = tree.q_floor
    worst = math.inf
    worst_at = None
    for j in range(1, tree.depth + 1):
        dist = tree_sum_distribution(tree, j)
        tree_cdf = np.cumsum(dist.probs)
        for t in range(1, j + 1):
            ref = binom_cdf(j, q, t - 1)
            margin = ref - float(tree_cdf[t - 1])
            if margin < worst:
                worst = margin
                worst_at = (j, t)
    return CheckReport(
        name="lemma6",
        params={"depth": tree.depth, "q": q},
        computed={"worst_at": worst_at},
        bounds={},
        passed=worst >= -MASS_TOL,
        margin=worst,
    )
