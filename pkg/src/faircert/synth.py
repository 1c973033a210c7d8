"""Seeded scenario generator with analytically known fairness quantities.

Scenarios pair a benchmark evaluator f with a system under test g on the
same synthetic inputs, constructed so that two quantities are exact by
construction rather than approximate:

* ``target_epsilon``: the worst benchmark-to-system total-variation
  deviation. g is built per record as the mixture ``(1-lam)*f + lam*u``
  toward a random distribution u, using the identity
  TV(f + lam*(u-f), f) = lam * TV(u, f) to hit a drawn deviation exactly;
  one designated record gets the full target.
* ``target_sp_gap_f``: the benchmark's parity gap. Group base rates on
  outcome 0 span an interval of width exactly ``target_sp_gap_f`` (the
  remaining mass follows one shared shape across groups, so no other
  outcome can exceed that spread), and within-group noise is centered per
  column so group means stay at the base rates.

Randomness comes from numpy's PCG64 generator seeded with ``spec.seed``;
the whole construction is a pure function of the spec, so equal specs give
byte-identical scenarios.

``saturate_prop1`` additionally plants one same-group record pair whose
system outcomes sit exactly 1e-3 under the transferred pair-gap bound
``2*epsilon + delta_f`` at kappa=0, for stress-testing bound checks near
equality. Outcome distributions only; score-form data is not generated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

from .errors import GenerationError
from .io import PairDistanceLookup
from .records import EvaluationPair, EvaluationRecord, OutcomeValue

# Gap left between the planted pair's observed value and the bound.
SATURATION_MARGIN = 1e-3
# Headroom that keeps the planted pair strictly dominant over noise pairs.
_SAT_HEADROOM = 0.05
_MIXTURE_ATTEMPTS = 100


@dataclass(frozen=True)
class ScenarioSpec:
    """Parameters of one synthetic audit scenario.

    ``feature_dim`` 0 means records carry no feature vectors; input
    distances are then emitted as an explicit pair-distance table derived
    from latent points (a genuine metric). ``noise_scale`` in [0, 2] scales
    the within-group outcome noise; keep it small when a benchmark with
    tight individual-fairness slack is wanted.
    """

    seed: int
    n_records: int
    n_groups: int = 2
    n_outcomes: int = 2
    target_epsilon: float = 0.0
    target_sp_gap_f: float = 0.0
    feature_dim: int = 0
    saturate_prop1: bool = False
    noise_scale: float = 1.0

    def __post_init__(self) -> None:
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise GenerationError(f"seed must be an integer, got {self.seed!r}")
        if self.seed < 0 or self.seed >= 2**64:
            raise GenerationError(f"seed must fit in 64 bits, got {self.seed!r}")
        if self.n_groups < 2:
            raise GenerationError(f"need at least 2 groups, got {self.n_groups!r}")
        if self.n_records < self.n_groups:
            raise GenerationError(
                f"{self.n_records!r} records cannot cover {self.n_groups!r} groups"
            )
        if self.n_outcomes < 2:
            raise GenerationError(f"need at least 2 outcomes, got {self.n_outcomes!r}")
        e = float(self.target_epsilon)
        if not math.isfinite(e) or not 0.0 <= e <= 1.0:
            raise GenerationError(
                f"target_epsilon must lie in [0, 1], got {self.target_epsilon!r}"
            )
        s = float(self.target_sp_gap_f)
        if not math.isfinite(s) or not 0.0 <= s <= 1.0:
            raise GenerationError(
                f"target_sp_gap_f must lie in [0, 1], got {self.target_sp_gap_f!r}"
            )
        if self.feature_dim < 0:
            raise GenerationError(f"feature_dim must be >= 0, got {self.feature_dim!r}")
        ns = float(self.noise_scale)
        if not math.isfinite(ns) or not 0.0 <= ns <= 2.0:
            raise GenerationError(f"noise_scale must lie in [0, 2], got {self.noise_scale!r}")
        if self.saturate_prop1:
            if self.n_records < self.n_groups + 1:
                raise GenerationError(
                    "saturate_prop1 needs at least two records in the first group"
                )
            if e < 2 * SATURATION_MARGIN:
                raise GenerationError(
                    f"saturate_prop1 needs target_epsilon >= {2 * SATURATION_MARGIN}"
                )
        object.__setattr__(self, "target_epsilon", e)
        object.__setattr__(self, "target_sp_gap_f", s)
        object.__setattr__(self, "noise_scale", ns)

    @classmethod
    def from_mapping(cls, data: dict) -> "ScenarioSpec":
        """Build from a kebab-case JSON mapping (the CLI spec-file format)."""
        known = {f.name.replace("_", "-"): f.name for f in fields(cls)}
        kwargs = {}
        for key, value in data.items():
            if key not in known:
                raise GenerationError(f"unknown scenario key {key!r}")
            kwargs[known[key]] = value
        if "seed" not in kwargs or "n_records" not in kwargs:
            raise GenerationError("scenario needs at least 'seed' and 'n-records'")
        return cls(**kwargs)


@dataclass(frozen=True)
class Scenario:
    """Generated data plus the quantities the construction makes exact."""

    spec: ScenarioSpec
    records_f: list = field(default_factory=list)
    records_g: list = field(default_factory=list)
    pair_distances: PairDistanceLookup | None = None
    ground_truth: dict = field(default_factory=dict)


def _group_bases(rng, spec: ScenarioSpec) -> np.ndarray:
    """Per-group base distributions whose outcome-0 rates span target_sp_gap_f.

    All groups share the conditional shape over outcomes 1..K-1, so the
    between-group rate difference on any outcome k >= 1 is the outcome-0
    spread scaled by that outcome's share, never exceeding the spread. The
    parity gap of the base table is therefore exactly the target.
    """
    g, k, s = spec.n_groups, spec.n_outcomes, spec.target_sp_gap_f
    low = (1.0 - s) / 2.0
    b0 = np.empty(g)
    b0[0] = low + s
    b0[1] = low
    if g > 2:
        b0[2:] = rng.uniform(low, low + s, g - 2)
    if k == 2:
        shape = np.array([1.0])
    else:
        shape = rng.dirichlet(np.ones(k - 1))
        if spec.saturate_prop1:
            # keep outcome 1 heavy enough to move mass against outcome 0
            lifted = np.zeros(k - 1)
            lifted[0] = 0.5
            shape = 0.5 * shape + lifted
    bases = np.empty((g, k))
    bases[:, 0] = b0
    bases[:, 1:] = (1.0 - b0)[:, None] * shape[None, :]
    return bases


def _group_noise(rng, count: int, k: int, amplitude: float) -> np.ndarray:
    """Zero-sum noise: each row sums to 0 and each column sums to 0.

    Row sums 0 keep every noisy row a distribution; column sums 0 keep the
    group mean pinned at the base, so parity stays exact.
    """
    raw = rng.uniform(-1.0, 1.0, (count, k))
    raw -= raw.mean(axis=1, keepdims=True)
    raw -= raw.mean(axis=0, keepdims=True)
    peak = np.abs(raw).max()
    if peak <= 0.0 or amplitude <= 0.0:
        return np.zeros((count, k))
    return raw * (amplitude / peak)


def _mixture_toward_random(rng, base_rows: np.ndarray, deviations: np.ndarray) -> np.ndarray:
    """Rows at total-variation distance ``deviations`` from ``base_rows``.

    Each row moves toward an independently drawn random distribution u by
    lam = deviation / TV(u, row); rows whose draw lands too close to the
    base are redrawn. Rows that stay unlucky fall back to the farthest
    simplex vertex, which reaches any deviation up to 1 - min(row). Zero
    deviations copy the row unchanged. Exact up to final-ulp rounding.
    """
    out = base_rows.copy()
    todo = deviations > 0.0
    k = base_rows.shape[1]
    for _ in range(_MIXTURE_ATTEMPTS):
        if not todo.any():
            return out
        idx = np.flatnonzero(todo)
        u = rng.standard_gamma(1.0, (len(idx), k))
        u /= u.sum(axis=1, keepdims=True)
        tv = 0.5 * np.abs(u - base_rows[idx]).sum(axis=1)
        ok = tv >= deviations[idx]
        rows = idx[ok]
        lam = (deviations[rows] / tv[ok])[:, None]
        out[rows] = (1.0 - lam) * base_rows[rows] + lam * u[ok]
        todo[rows] = False
    for row in np.flatnonzero(todo):
        u = np.zeros(k)
        u[int(np.argmin(base_rows[row]))] = 1.0
        tv = 0.5 * float(np.abs(u - base_rows[row]).sum())
        if tv < deviations[row]:
            raise GenerationError(
                f"deviation {deviations[row]:.6g} is unreachable from a row whose "
                f"farthest simplex point sits at {tv:.6g}"
            )
        lam = deviations[row] / tv
        out[row] = (1.0 - lam) * base_rows[row] + lam * u
    return out


def _saturating_geometry(base0, noise_tv_bound, spec):
    """Offset direction and half-distance for the planted worst pair.

    The pair sits at +-h around the first group's base along the (outcome 1
    minus outcome 0) direction, so it cancels in the group mean and parity
    stays exact. h clears every noise-driven pair by a fixed headroom,
    making the planted pair the unique worst pair for f; the caller then
    pushes the system's copies a further epsilon (minus the saturation
    margin on one side) outward.
    """
    s, e = spec.target_sp_gap_f, spec.target_epsilon
    h = s + noise_tv_bound + _SAT_HEADROOM
    lo = min(base0[0], base0[1])
    hi = max(base0[0], base0[1])
    if h + e > lo or hi + h + e > 1.0:
        raise GenerationError(
            f"cannot place saturating pair: needs {h + e:.6g} of room on outcomes 0/1, "
            f"base rates are {base0[0]:.6g}/{base0[1]:.6g}; lower target_sp_gap_f, "
            f"target_epsilon, or noise_scale"
        )
    move = np.zeros(len(base0))
    move[0] = -1.0
    move[1] = 1.0
    return move, h


def generate_scenario(spec: ScenarioSpec) -> Scenario:
    """Generate one scenario; a pure function of the spec."""
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    n, g, k = spec.n_records, spec.n_groups, spec.n_outcomes
    id_width = max(4, len(str(n - 1)))
    ids = [f"r{i:0{id_width}d}" for i in range(n)]
    group_width = len(str(g - 1))
    group_of = [f"g{i % g:0{group_width}d}" for i in range(n)]
    group_rows = [np.flatnonzero(np.arange(n) % g == a) for a in range(g)]

    bases = _group_bases(rng, spec)
    sat_rows = (0, g) if spec.saturate_prop1 else None

    f = np.empty((n, k))
    noise_tv_bound = 0.0
    for a in range(g):
        rows = group_rows[a]
        if sat_rows is not None and a == 0:
            rows = rows[2:]  # first two rows of group 0 are planted explicitly
        base = bases[a]
        margin = float(min(base.min(), (1.0 - base).min()))
        amplitude = 0.5 * margin * spec.noise_scale
        if len(rows) == 0:
            continue
        eta = _group_noise(rng, len(rows), k, amplitude)
        f[rows] = base + eta
        if eta.size:
            noise_tv_bound = max(noise_tv_bound, float(0.5 * np.abs(eta).sum(axis=1).max()))

    move = None
    if sat_rows is not None:
        move, h = _saturating_geometry(bases[0], noise_tv_bound, spec)
        f[sat_rows[0]] = bases[0] + h * move
        f[sat_rows[1]] = bases[0] - h * move

    e = spec.target_epsilon
    deviations = rng.uniform(0.0, e, n) if e > 0 else np.zeros(n)
    if e > 0:
        # a row can move at most 1 - min(row) before leaving the simplex;
        # undesignated rows only need to stay below the target, so clip them
        # well inside that ceiling
        reach = 1.0 - f.min(axis=1)
        np.minimum(deviations, 0.75 * reach, out=deviations)
    if sat_rows is not None:
        deviations[list(sat_rows)] = 0.0  # planted rows are moved explicitly below
    elif e > 0:
        designated = int(np.argmax(reach))  # the row with the most headroom
        if e > reach[designated]:
            raise GenerationError(
                f"target_epsilon {e:.6g} exceeds the largest reachable deviation "
                f"{reach[designated]:.6g} for the drawn outcome rows; lower the "
                f"target or raise n_outcomes"
            )
        deviations[designated] = e  # one designated record hits the target

    if e > 0:
        g_rows = _mixture_toward_random(rng, f, deviations)
    else:
        g_rows = f.copy()

    if sat_rows is not None and e > 0:
        g_rows[sat_rows[0]] = f[sat_rows[0]] + e * move
        g_rows[sat_rows[1]] = f[sat_rows[1]] - (e - SATURATION_MARGIN) * move

    features = None
    lookup = None
    if spec.feature_dim > 0:
        features = rng.normal(0.0, 1.0, (n, spec.feature_dim))
    else:
        latent = rng.normal(0.0, 1.0, (n, 2))
        entries = {}
        for i in range(n):
            for j in range(i + 1, n):
                d = float(np.sqrt(((latent[i] - latent[j]) ** 2).sum()) / math.sqrt(2.0))
                entries[(ids[i], ids[j])] = d
        lookup = PairDistanceLookup(entries)

    records_f = []
    records_g = []
    for i in range(n):
        feats = None if features is None else tuple(float(v) for v in features[i])
        records_f.append(
            EvaluationRecord(
                id=ids[i],
                group=group_of[i],
                outcome=OutcomeValue(distribution=tuple(float(v) for v in f[i])),
                features=feats,
            )
        )
        records_g.append(
            EvaluationRecord(
                id=ids[i],
                group=group_of[i],
                outcome=OutcomeValue(distribution=tuple(float(v) for v in g_rows[i])),
                features=feats,
            )
        )

    ground_truth = {
        "epsilon": float(e),
        "sp_gap_f": float(spec.target_sp_gap_f),
        "seed": int(spec.seed),
    }
    return Scenario(
        spec=spec,
        records_f=records_f,
        records_g=records_g,
        pair_distances=lookup,
        ground_truth=ground_truth,
    )


def perturb_candidate(records_f, target_epsilon: float, seed: int) -> list:
    """A fresh system evaluation at exact worst deviation ``target_epsilon``.

    Reuses the mixture construction against an existing benchmark's outcome
    rows: one designated record gets the full target, the rest draw smaller
    deviations. Useful for building populations of candidate auditors
    around one benchmark.
    """
    e = float(target_epsilon)
    if not math.isfinite(e) or not 0.0 <= e <= 1.0:
        raise GenerationError(f"target_epsilon must lie in [0, 1], got {target_epsilon!r}")
    if not records_f:
        raise GenerationError("no benchmark records to perturb")
    if not records_f[0].outcome.is_distribution:
        raise GenerationError("perturbation needs distribution outcomes")
    rng = np.random.Generator(np.random.PCG64(seed))
    ordered = sorted(records_f, key=lambda r: r.id)
    f = np.array([r.outcome.distribution for r in ordered], dtype=float)
    n = len(ordered)
    deviations = rng.uniform(0.0, e, n) if e > 0 else np.zeros(n)
    if e > 0:
        deviations[int(rng.integers(n))] = e
        g_rows = _mixture_toward_random(rng, f, deviations)
    else:
        g_rows = f.copy()
    return [
        EvaluationRecord(
            id=r.id,
            group=r.group,
            outcome=OutcomeValue(distribution=tuple(float(v) for v in g_rows[i])),
            features=r.features,
        )
        for i, r in enumerate(ordered)
    ]


def scenario_pairs(scenario: Scenario) -> list:
    """Aligned pairs (benchmark = f, system = g) for a generated scenario."""
    return [
        EvaluationPair(
            id=rf.id,
            group=rf.group,
            out_f=rf.outcome,
            out_g=rg.outcome,
            features=rf.features,
        )
        for rf, rg in zip(scenario.records_f, scenario.records_g)
    ]
