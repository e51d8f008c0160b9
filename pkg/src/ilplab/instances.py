"""Generators for the benchmark families and bin-packing configuration systems.

Two staircase families are generated directly:

  * sensitivity family: d x d unit lower bidiagonal matrix with subdiagonal
    delta, right-hand side (1, delta, ..., delta**(d-1)), plus an alternate
    right-hand side with the first entry zeroed;
  * proximity family: 15d x (6+15d) block staircase built from the Petersen
    matching incidence matrix M: the first row block is [M | I], every later
    row block j couples delta*I in column group j-1 with I in column group j,
    and the right-hand side of block j is the constant vector delta**(j-1).

Both are also embedded into bin-packing configuration systems: item sizes
are chosen so that the family columns, re-read as item multiplicity vectors,
fit into a unit bin exactly, and a 0/1 objective makes those columns the
only ones an optimal solution can use.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

from .errors import BudgetExceededError, EmbeddingError
from .exactla import Matrix, Vec, rat, vec, vec_str
from .lp import StandardLp, is_feasible_point
from .petersen import build_matching_system

SCHEMA_VERSION = 1

FAMILY_SENSITIVITY = "sensitivity"
FAMILY_PROXIMITY = "proximity"
FAMILY_BINPACK_SENS = "binpack_sens"
FAMILY_BINPACK_PROX = "binpack_prox"
FAMILY_CUSTOM = "custom"

FAMILIES = (
    FAMILY_SENSITIVITY,
    FAMILY_PROXIMITY,
    FAMILY_BINPACK_SENS,
    FAMILY_BINPACK_PROX,
    FAMILY_CUSTOM,
)


@dataclass(frozen=True)
class IlpInstance:
    """A generated (or user-supplied) equality-form ILP with its metadata."""

    lp: StandardLp
    family: str
    delta: int
    d: int
    alt_rhs: Vec | None = None
    notes: str = ""
    sizes: Vec | None = None
    epsilon: Fraction | None = None
    c1_indices: tuple[int, ...] | None = None

    def with_rhs(self, b: Vec) -> "IlpInstance":
        return replace(self, lp=StandardLp(self.lp.a, b, self.lp.c))


@dataclass(frozen=True)
class BinPackingInstance:
    """Items given as strictly increasing sizes in (0,1] with multiplicities."""

    sizes: Vec
    multiplicities: tuple[int, ...]
    epsilon: Fraction

    def __post_init__(self):
        if any(s <= 0 or s > 1 for s in self.sizes):
            raise ValueError("item sizes must lie in (0, 1]")
        if any(a >= b for a, b in zip(self.sizes, self.sizes[1:])):
            raise ValueError("item sizes must be strictly increasing")
        if len(self.multiplicities) != len(self.sizes):
            raise ValueError("need one multiplicity per size")


@dataclass(frozen=True)
class ConfigurationSet:
    """Configurations (columns) of a bin-packing system.

    ``c1_indices`` marks the distinguished zero-cost columns.  ``complete``
    says whether the list is the full configuration set or just the
    distinguished columns (the proximity embedding has far too many
    configurations to enumerate, and does not need them).
    """

    configurations: tuple[tuple[int, ...], ...]
    c1_indices: tuple[int, ...]
    complete: bool


# ---------------------------------------------------------------------------
# staircase families


def gen_sensitivity(delta: int, d: int) -> IlpInstance:
    """Unit lower bidiagonal system with subdiagonal delta; b' zeroes b[0]."""
    if delta < 1:
        raise ValueError("delta must be >= 1")
    if d < 2 or d % 2 != 0:
        raise ValueError("d must be even and >= 2")
    rows = [[0] * d for _ in range(d)]
    for i in range(d):
        rows[i][i] = 1
        if i > 0:
            rows[i][i - 1] = delta
    b = vec([delta**i for i in range(d)])
    b_prime = (Fraction(0),) + b[1:]
    lp = StandardLp(Matrix.from_rows(rows), b, vec([0] * d))
    return IlpInstance(lp, FAMILY_SENSITIVITY, delta, d, alt_rhs=b_prime)


def _forward_substitute(a: Matrix, b: Vec) -> Vec:
    """Solve a lower-triangular system with unit diagonal, exactly."""
    x: list[Fraction] = []
    for i in range(a.nrows):
        x.append(b[i] - sum((a.rows[i][j] * x[j] for j in range(i) if a.rows[i][j]), Fraction(0)))
    return tuple(x)


def expected_sensitivity_pair(delta: int, d: int) -> tuple[Vec, Vec]:
    """The unique solutions for b and b', computed by forward substitution."""
    inst = gen_sensitivity(delta, d)
    x = _forward_substitute(inst.lp.a, inst.lp.b)
    x_prime = _forward_substitute(inst.lp.a, inst.alt_rhs)
    if not is_feasible_point(inst.lp, x):
        raise AssertionError("forward substitution produced an infeasible point for b")
    if not is_feasible_point(StandardLp(inst.lp.a, inst.alt_rhs, inst.lp.c), x_prime):
        raise AssertionError("forward substitution produced an infeasible point for b'")
    return x, x_prime


def gen_proximity(delta: int, d: int) -> IlpInstance:
    """Block staircase over the Petersen matching incidence matrix.

    15d rows, 6+15d columns; every entry is 0, 1, or delta; the right-hand
    side of row block j is the constant vector delta**(j-1).
    """
    if delta < 2:
        raise ValueError("delta must be >= 2")
    if d < 1 or d % 2 != 1:
        raise ValueError("d must be odd and >= 1")
    m = build_matching_system().incidence
    nrows, ncols = 15 * d, 6 + 15 * d
    rows = [[0] * ncols for _ in range(nrows)]
    for e in range(15):
        for j in range(6):
            if m.rows[e][j]:
                rows[e][j] = 1
        rows[e][6 + e] = 1
    for block in range(2, d + 1):
        for k in range(15):
            r = 15 * (block - 1) + k
            rows[r][6 + 15 * (block - 2) + k] = delta
            rows[r][6 + 15 * (block - 1) + k] = 1
    b: list[int] = []
    for block in range(1, d + 1):
        b.extend([delta ** (block - 1)] * 15)
    lp = StandardLp(Matrix.from_rows(rows), vec(b), vec([0] * ncols))
    return IlpInstance(lp, FAMILY_PROXIMITY, delta, d)


def fractional_certificate(delta: int, d: int) -> Vec:
    """Optimal fractional point taking every matching column half a time.

    The tail is forward-substituted through the block recurrence
    w_1 = 0, delta*w_{j-1} + w_j = delta**(j-1) * ones.
    """
    inst = gen_proximity(delta, d)
    z: list[Fraction] = [Fraction(1, 2)] * 6
    w_prev = [Fraction(0)] * 15  # matching halves cover block 1 exactly
    z.extend(w_prev)
    for block in range(2, d + 1):
        target = Fraction(delta ** (block - 1))
        w_next = [target - delta * w for w in w_prev]
        z.extend(w_next)
        w_prev = w_next
    zt = tuple(z)
    if not is_feasible_point(inst.lp, zt):
        raise AssertionError("certificate fails exact feasibility")
    return zt


def p_q_constants(delta: int, d: int) -> tuple[int, int]:
    """Odd/even tail sums of the block recurrence, taken literally.

    p sums delta**(2i-1) for i = 1..(d-1)/2 and q sums delta**(2i-2) for
    i = 1..(d+1)/2, so q = delta*p + 1; the relation p = delta*(q - delta**(d-1))
    is asserted as a self-check.
    """
    if d % 2 != 1 or d < 1:
        raise ValueError("d must be odd and >= 1")
    p = sum(delta ** (2 * i - 1) for i in range(1, (d - 1) // 2 + 1))
    q = sum(delta ** (2 * i - 2) for i in range(1, (d + 1) // 2 + 1))
    assert p == delta * (q - delta ** (d - 1)), "tail-sum identity failed"
    return p, q


# ---------------------------------------------------------------------------
# bin-packing embeddings


def enumerate_configurations(sizes: Sequence[Fraction | int | str], limit: int = 1_000_000) -> list[tuple[int, ...]]:
    """Every k in Z^d_{>=0} with k.sizes <= 1, in lexicographic order."""
    s = vec(sizes)
    if any(x <= 0 or x > 1 for x in s):
        raise ValueError("sizes must lie in (0, 1]")
    out: list[tuple[int, ...]] = []
    k = [0] * len(s)

    def rec(i: int, capacity: Fraction):
        if i == len(s):
            if len(out) >= limit:
                raise BudgetExceededError(f"more than {limit} configurations")
            out.append(tuple(k))
            return
        top = math.floor(capacity / s[i])
        for v in range(top + 1):
            k[i] = v
            rec(i + 1, capacity - v * s[i])
        k[i] = 0

    rec(0, Fraction(1))
    return out


def _check_fits(config: Sequence[int], sizes: Vec, label: str):
    load = sum((ki * si for ki, si in zip(config, sizes) if ki), Fraction(0))
    if load > 1:
        raise EmbeddingError(f"{label} overfills the bin: load {load} > 1")


def gen_binpack_sensitivity(
    delta: int, d: int, limit: int = 1_000_000
) -> tuple[BinPackingInstance, ConfigurationSet, Vec]:
    """Bin-packing system whose zero-cost columns are the sensitivity family.

    Sizes are 1/(2*delta) + i*epsilon with epsilon = 1/(4*(d-1+delta*d)).
    Each staircase column i becomes "one item of size i plus delta items of
    size i+1"; the exact fit of every such column is asserted (for delta = 1
    two items already overfill the bin, so the embedding fails loudly).
    """
    if delta < 1:
        raise ValueError("delta must be >= 1")
    if d < 2 or d % 2 != 0:
        raise ValueError("d must be even and >= 2")
    eps = Fraction(1, 4 * (d - 1 + delta * d))
    sizes = tuple(Fraction(1, 2 * delta) + i * eps for i in range(1, d + 1))
    general = gen_sensitivity(delta, d)
    c1_cols = [tuple(int(x) for x in general.lp.a.col(j)) for j in range(d)]
    for j, col in enumerate(c1_cols):
        _check_fits(col, sizes, f"column {j}")
    all_configs = enumerate_configurations(sizes, limit=limit)
    config_set = set(all_configs)
    for col in c1_cols:
        if col not in config_set:
            raise EmbeddingError(f"column {col} is not a feasible configuration")
    ordered = list(c1_cols) + [k for k in all_configs if k not in set(c1_cols)]
    c = vec([0] * d + [1] * (len(ordered) - d))
    cs = ConfigurationSet(tuple(ordered), tuple(range(d)), complete=True)
    multiplicities = tuple(delta**i for i in range(d))
    return BinPackingInstance(sizes, multiplicities, eps), cs, c


def gen_binpack_proximity(
    delta: int, d: int
) -> tuple[BinPackingInstance, ConfigurationSet, Vec]:
    """Bin-packing system whose zero-cost columns are the proximity family.

    One distinct size per row (15*d of them), base length 1/(30*delta).
    epsilon is the largest exact rational for which every family column
    still fits in a unit bin, capped at 57/(60*(D-2+delta*(D-1))) with D the
    number of distinct sizes.  The full configuration set is astronomically
    large and never materialized; only the family columns are listed, which
    is enough because every other configuration has objective cost 1.
    """
    if delta < 2:
        raise ValueError("delta must be >= 2")
    if d < 3 or d % 2 != 1:
        raise ValueError("d must be odd and >= 3")
    n_sizes = 15 * d
    base = Fraction(1, 30 * delta)
    general = gen_proximity(delta, d)
    caps: list[Fraction] = []
    # single largest item
    caps.append((1 - base) / n_sizes)
    # one item of size r together with delta items of size r+15
    for r in range(1, 15 * (d - 1) + 1):
        caps.append((1 - base - delta * base) / (r + delta * (r + 15)))
    # the five items of each matching column
    matchings = build_matching_system().matchings
    for m in matchings:
        caps.append((1 - 5 * base) / sum(e + 1 for e in m))
    cap = Fraction(57, 60 * (n_sizes - 2 + delta * (n_sizes - 1)))
    eps = min(min(caps), cap)
    sizes = tuple(base + r * eps for r in range(1, n_sizes + 1))
    c1_cols = [tuple(int(x) for x in general.lp.a.col(j)) for j in range(general.lp.n)]
    for j, col in enumerate(c1_cols):
        _check_fits(col, sizes, f"column {j}")
    cs = ConfigurationSet(tuple(c1_cols), tuple(range(len(c1_cols))), complete=False)
    c = vec([0] * len(c1_cols))
    multiplicities = tuple(int(x) for x in general.lp.b)
    return BinPackingInstance(sizes, multiplicities, eps), cs, c


def binpack_ilp_instance(
    bp: BinPackingInstance,
    cs: ConfigurationSet,
    c: Vec,
    family: str,
    delta: int,
    d: int,
) -> IlpInstance:
    """Assemble the configuration system as a measurable equality-form ILP."""
    a = Matrix.from_cols(cs.configurations)
    b = vec(bp.multiplicities)
    alt = None
    if family == FAMILY_BINPACK_SENS:
        alt = (Fraction(0),) + b[1:]
    lp = StandardLp(a, b, c)
    return IlpInstance(
        lp,
        family,
        delta,
        d,
        alt_rhs=alt,
        sizes=bp.sizes,
        epsilon=bp.epsilon,
        c1_indices=cs.c1_indices,
        notes=f"configurations={'all' if cs.complete else 'distinguished only'}",
    )


# ---------------------------------------------------------------------------
# serialization


def instance_to_doc(inst: IlpInstance) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "family": inst.family,
        "delta": inst.delta,
        "d": inst.d,
        "matrix": inst.lp.a.to_json(),
        "b": vec_str(inst.lp.b),
        "b_prime": vec_str(inst.alt_rhs) if inst.alt_rhs is not None else None,
        "c": vec_str(inst.lp.c),
        "notes": inst.notes,
    }
    if inst.sizes is not None:
        doc["sizes"] = vec_str(inst.sizes)
    if inst.epsilon is not None:
        doc["epsilon"] = str(inst.epsilon)
    if inst.c1_indices is not None:
        doc["c1_indices"] = list(inst.c1_indices)
    return doc


def instance_from_doc(doc: dict) -> IlpInstance:
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
    family = doc["family"]
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    lp = StandardLp(Matrix.from_json(doc["matrix"]), vec(doc["b"]), vec(doc["c"]))
    return IlpInstance(
        lp,
        family,
        int(doc["delta"]),
        int(doc["d"]),
        alt_rhs=vec(doc["b_prime"]) if doc.get("b_prime") is not None else None,
        notes=doc.get("notes", ""),
        sizes=vec(doc["sizes"]) if doc.get("sizes") is not None else None,
        epsilon=rat(doc["epsilon"]) if doc.get("epsilon") is not None else None,
        c1_indices=tuple(doc["c1_indices"]) if doc.get("c1_indices") is not None else None,
    )


def doc_dumps(doc: dict) -> str:
    """Canonical JSON: sorted keys, stable separators."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
