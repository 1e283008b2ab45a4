"""Monogamy inequalities, residual entanglement and SLOCC classification for qubit states."""

from __future__ import annotations

import enum
import itertools
import logging
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass, field

import numpy as np

from . import measures as ms
from .measures import PartitionSpec
from .qmat import DimensionError, NumericError
from .states import (
    DensityMatrix,
    StateVector,
    as_density,
    basis_state,
    ghz,
    ghz_w_mixture,
    haar_random_pure,
    random_unitary,
    sample_rng,
    w,
)

log = logging.getLogger(__name__)

HOLD_TOL = 1e-9
STRICT_TOL = 1e-7
TANGLE_THRESHOLD = 1e-6
RANK_TOL = 1e-9
PAIR_ENTANGLED_TOL = 1e-7

MEASURES = ("concurrence", "negativity", "realignment")


@dataclass
class MonogamyReport:
    """One evaluated inequality ``lhs <= rhs``."""

    inequality_id: str
    lhs: float
    rhs: float
    cut_description: str
    tolerance: float = HOLD_TOL
    strict_threshold: float = STRICT_TOL
    terms: dict[str, float] = field(default_factory=dict)
    seed: dict | None = None

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.slack >= -self.tolerance

    @property
    def strict(self) -> bool:
        return self.slack > self.strict_threshold

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(slack=self.slack, holds=self.holds, strict=self.strict)
        return d


@dataclass
class ResidualRecord:
    tau_ckw: float | None
    pi_negativity: float
    tau_N: float
    tau_R: float


class SloccClass(str, enum.Enum):
    A_B_C = "A-B-C"
    A_BC = "A-BC"
    B_AC = "B-AC"
    C_AB = "C-AB"
    W = "W"
    GHZ = "GHZ"


def _require_pure(psi, n: int | None = None, at_least: int | None = None) -> StateVector:
    if not isinstance(psi, StateVector):
        raise TypeError("expected a pure StateVector")
    if any(d != 2 for d in psi.dims):
        raise DimensionError("expected a qubit state")
    if n is not None and psi.n != n:
        raise DimensionError(f"expected {n} qubits, got {psi.n}")
    if at_least is not None and psi.n < at_least:
        raise DimensionError(f"expected at least {at_least} qubits, got {psi.n}")
    return psi


def _three_qubits(state) -> DensityMatrix:
    rho = as_density(state)
    if rho.dims != (2, 2, 2):
        raise DimensionError(f"expected three qubits, got dims {rho.dims}")
    return rho


def group_measure(rho: DensityMatrix, focus: int, group: Sequence[int], kind: str) -> float:
    """Measure between ``focus`` and ``group`` on their joint reduced state, cut focus:group."""
    keep = sorted({focus, *group})
    red = rho.reduce(keep)
    pos = {q: k for k, q in enumerate(keep)}
    cut = PartitionSpec((pos[focus],), tuple(pos[g] for g in sorted(group)))
    return ms.measure(red, cut, kind)


def _focus_vs_rest(psi: StateVector, focus: int, kind: str) -> float:
    return ms.measure(psi, PartitionSpec.single(focus, psi.n), kind)


def ckw_check(psi: StateVector) -> MonogamyReport:
    _require_pure(psi, 3)
    rho = psi.density()
    c_ab = group_measure(rho, 0, (1,), "concurrence")
    c_ac = group_measure(rho, 0, (2,), "concurrence")
    c_a_bc = ms.concurrence_pure_cut(psi, PartitionSpec.single(0, 3))
    return MonogamyReport(
        "ckw",
        c_ab**2 + c_ac**2,
        c_a_bc**2,
        "C_AB^2 + C_AC^2 <= C_A:BC^2",
        terms={"C_AB": c_ab, "C_AC": c_ac, "C_A:BC": c_a_bc},
    )


def three_tangle_pure(psi: StateVector) -> float:
    r = ckw_check(psi)
    tau = r.slack
    if -HOLD_TOL <= tau < 0:
        tau = 0.0
    return float(tau)


def residual_pi(state) -> float:
    """``N_A:BC^2 - N_AB^2 - N_AC^2`` for a three-qubit state."""
    rho = _three_qubits(state)
    n_a_bc = ms.negativity(rho, PartitionSpec.single(0, 3))
    n_ab = group_measure(rho, 0, (1,), "negativity")
    n_ac = group_measure(rho, 0, (2,), "negativity")
    return float(n_a_bc**2 - n_ab**2 - n_ac**2)


def monogamy_qubitwise(psi: StateVector, focus: int, measure: str) -> MonogamyReport:
    """Sum of squared pair measures with ``focus`` against the squared focus:rest measure."""
    _require_pure(psi, at_least=3)
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}")
    if not 0 <= focus < psi.n:
        raise ValueError(f"focus {focus} out of range")
    rho = psi.density()
    terms = {}
    for j in range(psi.n):
        if j != focus:
            terms[f"{focus},{j}"] = group_measure(rho, focus, (j,), measure)
    rhs_m = _focus_vs_rest(psi, focus, measure)
    terms[f"{focus}:rest"] = rhs_m
    lhs = sum(v**2 for k, v in terms.items() if k != f"{focus}:rest")
    return MonogamyReport(
        f"qubitwise-{measure}",
        lhs,
        rhs_m**2,
        f"focus {focus} vs each other qubit; {measure}",
        terms=terms,
    )


def monogamy_partition(psi: StateVector, focus: int, groups: Sequence[Sequence[int]], measure: str) -> MonogamyReport:
    """Sum over groups of ``m(focus, group)^2`` against ``m(focus : rest)^2``.

    ``groups`` must partition the qubits other than ``focus``. No restriction
    on group sizes is applied here; see :func:`monogamy_block` for the
    validated form with single-qubit groups plus one arbitrary block.
    """
    _require_pure(psi, at_least=2)
    if measure not in ("negativity", "realignment"):
        raise ValueError("block inequalities are defined for negativity and realignment")
    groups = [tuple(sorted(int(q) for q in g)) for g in groups]
    rest = sorted(q for q in range(psi.n) if q != focus)
    flat = sorted(q for g in groups for q in g)
    if not 0 <= focus < psi.n or flat != rest or any(not g for g in groups):
        raise ValueError(f"groups {groups} do not partition the qubits other than {focus}")
    rho = psi.density()
    terms = {}
    for g in groups:
        terms[f"{focus}|{','.join(map(str, g))}"] = group_measure(rho, focus, g, measure)
    rhs_m = _focus_vs_rest(psi, focus, measure)
    lhs = sum(v**2 for v in terms.values())
    terms[f"{focus}:rest"] = rhs_m
    desc = f"{focus} | " + " | ".join(",".join(map(str, g)) for g in groups)
    return MonogamyReport(f"block-{measure}", lhs, rhs_m**2, desc, terms=terms)


def monogamy_block(
    psi: StateVector, focus: int, singles: Sequence[int], block: Sequence[int], measure: str
) -> MonogamyReport:
    """Block monogamy: single qubits ``singles`` plus one block ``block`` of any size."""
    groups = [(q,) for q in singles] + [tuple(block)]
    if not block:
        raise ValueError("block E must be nonempty")
    return monogamy_partition(psi, focus, groups, measure)


def blockings(n: int, focus: int = 0) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Distinct (singles, E) blockings around ``focus`` with at least one single qubit.

    The all-singletons blocking appears once (with E the last remaining
    qubit); every E with ``2 <= |E| <= n - 2`` follows.
    """
    rest = [q for q in range(n) if q != focus]
    out = [(tuple(rest[:-1]), (rest[-1],))]
    for size in range(2, len(rest)):
        for e in itertools.combinations(rest, size):
            out.append((tuple(q for q in rest if q not in e), e))
    return out


def set_partitions(items: Sequence[int]):
    """All set partitions of ``items`` (as lists of tuples)."""
    items = list(items)
    if not items:
        yield []
        return
    first, tail = items[0], items[1:]
    for part in set_partitions(tail):
        yield [(first,)] + part
        for k in range(len(part)):
            yield part[:k] + [(first,) + part[k]] + part[k + 1 :]


def _bound_radicand(x: float) -> float:
    if x < -HOLD_TOL:
        raise NumericError(f"bound radicand {x:.3e} is negative; input is not a physical state")
    return max(x, 0.0)


def theorem2_bounds(state) -> tuple[MonogamyReport, MonogamyReport]:
    """``m_AB <= (1 + sqrt(1 - 4 m_C:AB^2)) / 4`` for negativity and realignment.

    Valid for any three-qubit state; the slack of each report is the
    corresponding tau_N / tau_R.
    """
    rho = _three_qubits(state)
    cut_c = PartitionSpec((2,), (0, 1))
    out = []
    for kind in ("negativity", "realignment"):
        m_ab = group_measure(rho, 0, (1,), kind)
        m_c = ms.measure(rho, cut_c, kind)
        bound = 0.25 * (1 + np.sqrt(_bound_radicand(1 - 4 * m_c**2)))
        out.append(
            MonogamyReport(
                f"bound-{kind}",
                m_ab,
                float(bound),
                f"{kind}: m_AB <= (1 + sqrt(1 - 4 m_C:AB^2))/4",
                terms={"AB": m_ab, "C:AB": m_c},
            )
        )
    return out[0], out[1]


def residuals(state) -> ResidualRecord:
    rho = _three_qubits(state)
    tau = three_tangle_pure(state) if isinstance(state, StateVector) else None
    rn, rr = theorem2_bounds(rho)
    return ResidualRecord(tau, residual_pi(rho), rn.slack, rr.slack)


def tau_sweep(p_grid: Iterable[float]) -> list[tuple[float, float, float]]:
    """Rows ``(p, tau_N, tau_R)`` for the GHZ/W mixture at each grid value."""
    rows = []
    for p in p_grid:
        p = float(p)
        if not 0 <= p <= 1:
            raise ValueError(f"grid value {p} outside [0, 1]")
        rn, rr = theorem2_bounds(ghz_w_mixture(p))
        rows.append((p, rn.slack, rr.slack))
    return rows


def sweep_grid(step: float) -> np.ndarray:
    if not 0 < step <= 1:
        raise ValueError("grid step must lie in (0, 1]")
    k = int(round(1 / step))
    if abs(k * step - 1) > 1e-9:
        k = int(np.floor(1 / step))
        return np.append(np.arange(k + 1) * step, 1.0)
    return np.linspace(0.0, 1.0, k + 1)


def reduced_ranks(psi: StateVector, tol: float = RANK_TOL) -> tuple[int, ...]:
    rho = psi.density()
    return tuple(int(np.sum(rho.reduce([q]).eigenvalues > tol)) for q in range(psi.n))


def slocc_report(psi: StateVector) -> dict:
    """Label plus the data behind it (ranks, tangle, borderline flag)."""
    _require_pure(psi, 3)
    ranks = reduced_ranks(psi)
    tau = three_tangle_pure(psi)
    ones = [q for q, r in enumerate(ranks) if r == 1]
    borderline = False
    if len(ones) >= 2:
        label = SloccClass.A_B_C
    elif len(ones) == 1:
        label = (SloccClass.A_BC, SloccClass.B_AC, SloccClass.C_AB)[ones[0]]
    elif tau > TANGLE_THRESHOLD:
        label = SloccClass.GHZ
        borderline = tau < 100 * TANGLE_THRESHOLD
        if borderline:
            log.warning("three-tangle %.3e is close to the GHZ/W threshold", tau)
    else:
        label = SloccClass.W
    return {"class": label.value, "ranks": list(ranks), "tau": tau, "borderline": borderline}


def classify_slocc(psi: StateVector) -> SloccClass:
    return SloccClass(slocc_report(psi)["class"])


TABLE1_STATES = {
    SloccClass.A_B_C: lambda: basis_state("000"),
    SloccClass.A_BC: lambda: _bell_on((1, 2)),
    SloccClass.B_AC: lambda: _bell_on((0, 2)),
    SloccClass.C_AB: lambda: _bell_on((0, 1)),
}


def _bell_on(pair):
    a = np.zeros(8, dtype=complex)
    other = ({0, 1, 2} - set(pair)).pop()
    for b in (0, 1):
        bits = [0, 0, 0]
        bits[pair[0]] = bits[pair[1]] = b
        bits[other] = 0
        a[int("".join(map(str, bits)), 2)] = 1 / np.sqrt(2)
    return StateVector(a, (2, 2, 2))


def table1_rows() -> list[dict]:
    """Representative state per SLOCC class with its tangle and negativity residual."""
    reps = {k: f() for k, f in TABLE1_STATES.items()}
    reps[SloccClass.W] = w(3)
    reps[SloccClass.GHZ] = ghz(3)
    rows = []
    for label, psi in reps.items():
        tau = three_tangle_pure(psi)
        pi = residual_pi(psi)
        rows.append(
            {
                "class": label.value,
                "classified_as": classify_slocc(psi).value,
                "tau_ABC": tau,
                "pi_ABC": pi,
                "tau_marker": ">0" if tau > TANGLE_THRESHOLD else "0",
                "pi_marker": ">0" if pi > TANGLE_THRESHOLD else "0",
            }
        )
    return rows


# --- conjecture campaign -------------------------------------------------


def qualification(psi: StateVector, focus: int) -> dict:
    """Two readings of "focus is entangled with at least two other qubits".

    ``pairwise``: at least two partners with pair negativity above threshold.
    ``cut``: focus:rest negativity above threshold and at least two partners
    whose pair state with the focus is not a product.
    """
    rho = psi.density()
    partners = [j for j in range(psi.n) if j != focus]
    pair_neg = {j: group_measure(rho, focus, (j,), "negativity") for j in partners}
    non_product = 0
    rho_f = rho.reduce([focus]).matrix
    for j in partners:
        pair = rho.reduce([focus, j])
        rho_j = rho.reduce([j]).matrix
        prod = np.kron(rho_f, rho_j) if focus < j else np.kron(rho_j, rho_f)
        if np.max(np.abs(pair.matrix - prod)) > PAIR_ENTANGLED_TOL:
            non_product += 1
    n_cut = _focus_vs_rest(psi, focus, "negativity")
    return {
        "pairwise": sum(v > PAIR_ENTANGLED_TOL for v in pair_neg.values()) >= 2,
        "cut": n_cut > PAIR_ENTANGLED_TOL and non_product >= 2,
    }


def _blocking_key(singles, block) -> str:
    return ",".join(map(str, singles)) + "|" + ",".join(map(str, block))


def conjecture_campaign(
    n_qubits: int,
    samples: int,
    seed: int,
    focus: int = 0,
    general_groups: bool = False,
    tolerance: float = HOLD_TOL,
) -> dict:
    """Evaluate block monogamy for negativity and realignment on Haar samples.

    Sample ``i`` is drawn from :func:`entshare.states.sample_rng` ``(seed, i)``.
    With ``general_groups`` every set partition of the other qubits is also
    evaluated and reported under ``"exploratory"``; those results carry no
    claim of validity.
    """
    if n_qubits < 3:
        raise ValueError("campaign needs at least 3 qubits")
    if samples < 0:
        raise ValueError("samples must be nonnegative")
    kinds = ("negativity", "realignment")
    blocks = blockings(n_qubits, focus)

    def fresh():
        return {
            "evaluations": 0,
            "violations": 0,
            "min_slack": None,
            "non_strict_pairwise": 0,
            "non_strict_cut": 0,
        }

    per_block = {_blocking_key(s, e): {k: fresh() for k in kinds} for s, e in blocks}
    exploratory: dict = {}
    qualifying = {"pairwise": 0, "cut": 0}
    worst = None

    def fold(slot, report, qual):
        report.tolerance = tolerance
        slot["evaluations"] += 1
        sl = report.slack
        if slot["min_slack"] is None or sl < slot["min_slack"]:
            slot["min_slack"] = sl
        if not report.holds:
            slot["violations"] += 1
        if not report.strict:
            for variant in ("pairwise", "cut"):
                if qual[variant]:
                    slot[f"non_strict_{variant}"] += 1

    for i in range(samples):
        psi = haar_random_pure(n_qubits, sample_rng(seed, i))
        qual = qualification(psi, focus)
        for variant, ok in qual.items():
            qualifying[variant] += int(ok)
        for singles, block in blocks:
            key = _blocking_key(singles, block)
            for kind in kinds:
                rep = monogamy_block(psi, focus, singles, block, kind)
                fold(per_block[key][kind], rep, qual)
                if worst is None or rep.slack < worst["slack"]:
                    worst = {"sample": i, "blocking": key, "measure": kind, "slack": rep.slack}
        if general_groups:
            rest = [q for q in range(n_qubits) if q != focus]
            for groups in set_partitions(rest):
                if len(groups) < 2:
                    continue
                key = " | ".join(",".join(map(str, g)) for g in sorted(groups))
                slot = exploratory.setdefault(key, {k: fresh() for k in kinds})
                for kind in kinds:
                    fold(slot[kind], monogamy_partition(psi, focus, groups, kind), qual)

    totals = {
        "evaluations": sum(v[k]["evaluations"] for v in per_block.values() for k in kinds),
        "violations": sum(v[k]["violations"] for v in per_block.values() for k in kinds),
        "non_strict_pairwise": sum(v[k]["non_strict_pairwise"] for v in per_block.values() for k in kinds),
        "non_strict_cut": sum(v[k]["non_strict_cut"] for v in per_block.values() for k in kinds),
    }
    slacks = [v[k]["min_slack"] for v in per_block.values() for k in kinds if v[k]["min_slack"] is not None]
    summary = {
        "n_qubits": n_qubits,
        "samples": samples,
        "focus": focus,
        "seed": {"base": seed, "scheme": "SeedSequence([base, sample_index]) -> PCG64"},
        "tolerance": tolerance,
        "strict_threshold": STRICT_TOL,
        "qualifying": qualifying,
        "min_slack": min(slacks) if slacks else None,
        "worst": worst,
        **totals,
        "per_blocking": per_block,
    }
    if general_groups:
        summary["exploratory"] = exploratory
    return summary


# --- mixed-state heuristic -------------------------------------------------


def _pure_value(vec: np.ndarray, dims, cut: PartitionSpec, measure: str) -> float:
    mat = vec.reshape(dims).transpose(cut.left + cut.right)
    dl = int(np.prod([dims[i] for i in cut.left]))
    s = np.linalg.svd(mat.reshape(dl, -1), compute_uv=False)
    if measure == "negativity-squared":
        # pure states: ||psi^{T_A}||_1 = (sum of Schmidt coefficients)^2
        return ((np.sum(s) ** 2 - 1) / 2) ** 2
    if measure == "concurrence-squared":
        return max(2 * (1 - np.sum(s**4)), 0.0)
    raise ValueError(f"unknown measure {measure!r}")


def convex_roof_upper_bound(
    state,
    cut: PartitionSpec,
    measure: str,
    trials: int,
    seed: int,
    ensemble_size: int | None = None,
) -> float:
    """Heuristic upper bound on the convex roof of a pure-state measure.

    Ensembles ``psi_i = sum_k U_ik sqrt(w_k) e_k`` are generated from the
    eigendecomposition ``rho = sum_k w_k e_k e_k^H`` with random isometries U
    (the eigen-ensemble itself is tried first). The smallest ensemble average
    seen is returned, so the result never drops below the true roof and is
    nonincreasing in ``trials`` for a fixed seed.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rho = as_density(state)
    cut.check(rho.n)
    w, v = np.linalg.eigh(rho.matrix)
    keep = w > 1e-12
    x = v[:, keep] * np.sqrt(w[keep])
    r = x.shape[1]
    m = ensemble_size or r
    if m < r:
        raise ValueError("ensemble_size must be at least the rank")
    rng = np.random.default_rng(seed)

    def average(u):
        psis = x @ u.T  # columns are unnormalized ensemble members
        total = 0.0
        for col in psis.T:
            p = np.real(np.vdot(col, col))
            if p > 1e-15:
                total += p * _pure_value(col / np.sqrt(p), rho.dims, cut, measure)
        return total

    best = average(np.eye(m, r, dtype=complex))
    for _ in range(trials - 1):
        u = random_unitary(m, rng)[:, :r]
        best = min(best, average(u))
    return float(best)
