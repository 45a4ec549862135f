"""Joint distributions over named finite random variables.

Dense probability tensors with named axes, factorized Dirichlet sampling,
channel extension, and conditional mutual information in bits (log base 2
throughout).  Conventions: 0*log 0 := 0, and a ratio p/0 is treated as a
genuine singularity only when p > 1e-15 (it cannot arise from a valid
joint, where every marginal dominates the joint cell).

All operations are pure functions of immutable inputs; callers may
evaluate many distributions in parallel without synchronization.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .channel import Channel
from .errors import (
    AlphabetMismatch,
    FactorizationViolation,
    InvalidParameter,
    NegativeProbability,
    SpecCoverageError,
    UnknownVariable,
)

MASS_TOL = 1e-12
MI_CLAMP = 1e-12
SUPPORT_EPS = 1e-15

Names = Iterable[str] | str


def _names(spec: Names) -> tuple[str, ...]:
    """Normalize 'A B,C' or an iterable of names into a tuple."""
    if isinstance(spec, str):
        parts = [p for p in spec.replace(",", " ").split() if p]
        return tuple(parts)
    return tuple(spec)


@dataclass(frozen=True)
class RandomVariableSet:
    """Ordered named variables with matching cardinalities."""

    names: tuple[str, ...]
    sizes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if len(self.names) != len(set(self.names)):
            raise InvalidParameter(f"duplicate variable names in {self.names}")
        if len(self.names) != len(self.sizes):
            raise InvalidParameter("names and sizes must have equal length")
        if any(s < 1 for s in self.sizes):
            raise InvalidParameter(f"all cardinalities must be >= 1, got {self.sizes}")

    def axis(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownVariable(name) from None

    def size(self, name: str) -> int:
        return self.sizes[self.axis(name)]

    def shape(self) -> tuple[int, ...]:
        return self.sizes


@dataclass(frozen=True)
class JointDistribution:
    """Dense probability tensor over a RandomVariableSet."""

    rvs: RandomVariableSet
    prob: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.prob, dtype=float)
        if arr.shape != self.rvs.shape():
            raise InvalidParameter(
                f"tensor shape {arr.shape} does not match variable sizes {self.rvs.shape()}"
            )
        if arr.size and arr.min() < -MASS_TOL:
            raise NegativeProbability(f"joint has entry {arr.min():.6g} < 0")
        total = float(arr.sum())
        if abs(total - 1.0) > MASS_TOL:
            raise InvalidParameter(f"joint mass {total!r} differs from 1 beyond {MASS_TOL}")
        arr = np.clip(arr, 0.0, None)
        arr.setflags(write=False)
        object.__setattr__(self, "prob", arr)

    @property
    def names(self) -> tuple[str, ...]:
        return self.rvs.names

    def axes_of(self, names: Sequence[str]) -> tuple[int, ...]:
        return tuple(self.rvs.axis(n) for n in names)


@dataclass(frozen=True)
class Factor:
    """One conditional block p(targets | given) of a factorization chain."""

    targets: tuple[str, ...]
    given: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "targets", _names(self.targets))
        object.__setattr__(self, "given", _names(self.given))


@dataclass(frozen=True)
class FactorizationSpec:
    """Ordered factor chain; conditioning may reference earlier targets only."""

    factors: tuple[Factor, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        seen: set[str] = set()
        for f in self.factors:
            for t in f.targets:
                if t in seen:
                    raise InvalidParameter(f"variable {t!r} targeted twice")
            missing = set(f.given) - seen
            if missing:
                raise InvalidParameter(
                    f"factor {f.targets} conditions on later/unknown variables {sorted(missing)}"
                )
            seen.update(f.targets)

    @property
    def targets(self) -> tuple[str, ...]:
        return tuple(t for f in self.factors for t in f.targets)


def chain(*factors: tuple) -> FactorizationSpec:
    """Shorthand: chain(("U",), ("X", "U")) == p(U) p(X|U)."""
    out = []
    for f in factors:
        if isinstance(f, Factor):
            out.append(f)
        elif len(f) == 1:
            out.append(Factor(_names(f[0])))
        else:
            out.append(Factor(_names(f[0]), _names(f[1])))
    return FactorizationSpec(tuple(out))


# ---------------------------------------------------------------------------
# Sampling and construction
# ---------------------------------------------------------------------------


def _multiply_block(
    joint: np.ndarray, rvs: RandomVariableSet, block: np.ndarray, axes: tuple[int, ...]
) -> np.ndarray:
    """Multiply a factor living on `axes` (ascending order) into the full tensor."""
    shape = [1] * len(rvs.names)
    for ax, s in zip(axes, block.shape):
        shape[ax] = s
    return joint * block.reshape(shape)


def _dirichlet_factor(
    rvs: RandomVariableSet, factor: Factor, rng: np.random.Generator
) -> tuple[np.ndarray, tuple[int, ...]]:
    """Draw p(targets | given) rows from Dirichlet(1), one per conditioning cell.

    Returns the factor tensor over sorted(given+target axes) plus those axes.
    """
    g_axes = sorted(rvs.axis(n) for n in factor.given)
    t_axes = sorted(rvs.axis(n) for n in factor.targets)
    all_axes = tuple(sorted(g_axes + t_axes))
    g_sizes = [rvs.sizes[a] for a in g_axes]
    t_sizes = [rvs.sizes[a] for a in t_axes]
    k = int(np.prod(t_sizes)) if t_sizes else 1
    block = np.zeros([rvs.sizes[a] for a in all_axes])
    for cell in np.ndindex(*g_sizes):
        row = rng.dirichlet(np.ones(k)).reshape(t_sizes)
        idx = []
        gpos = {a: c for a, c in zip(g_axes, cell)}
        for a in all_axes:
            idx.append(gpos[a] if a in gpos else slice(None))
        block[tuple(idx)] = row
    return block, all_axes


def sample_factored(rvs: RandomVariableSet, spec: FactorizationSpec, seed: int) -> JointDistribution:
    """Sample a joint whose conditionals follow `spec`, deterministically in seed.

    Every conditional row is an independent symmetric Dirichlet(1) draw.
    """
    if set(spec.targets) != set(rvs.names):
        missing = set(rvs.names) - set(spec.targets)
        extra = set(spec.targets) - set(rvs.names)
        raise SpecCoverageError(
            f"factorization does not cover variable set (missing {sorted(missing)}, "
            f"extra {sorted(extra)})"
        )
    rng = np.random.default_rng(seed)
    joint = np.ones(rvs.shape())
    for f in spec.factors:
        block, axes = _dirichlet_factor(rvs, f, rng)
        joint = _multiply_block(joint, rvs, block, axes)
    return JointDistribution(rvs, joint)


def extend_through_channel(
    d: JointDistribution,
    c: Channel,
    x1: str = "X1",
    x2: str = "X2",
    y1: str = "Y1",
    y2: str = "Y2",
) -> JointDistribution:
    """Append channel outputs: p(all, y1, y2) = p(all) p(y1, y2 | x1, x2)."""
    for name in (x1, x2):
        if name not in d.names:
            raise AlphabetMismatch(f"distribution lacks channel input {name!r}")
    for name in (y1, y2):
        if name in d.names:
            raise AlphabetMismatch(f"output name {name!r} already present")
    if d.rvs.size(x1) != c.x1.size or d.rvs.size(x2) != c.x2.size:
        raise AlphabetMismatch(
            f"input sizes ({d.rvs.size(x1)},{d.rvs.size(x2)}) do not match channel "
            f"({c.x1.size},{c.x2.size})"
        )
    n = len(d.names)
    letters = "abcdefghijklmnopqrstuv"[:n]
    ly1, ly2 = "w", "z"
    i1, i2 = d.rvs.axis(x1), d.rvs.axis(x2)
    sub = f"{letters},{ly1}{ly2}{letters[i1]}{letters[i2]}->{letters}{ly1}{ly2}"
    prob = np.einsum(sub, d.prob, c.transition)
    rvs = RandomVariableSet(d.names + (y1, y2), d.rvs.sizes + (c.y1.size, c.y2.size))
    return JointDistribution(rvs, prob)


def marginalize(d: JointDistribution, keep: Names) -> JointDistribution:
    """Sum out every variable not in `keep`; order of kept axes is preserved."""
    keep_t = _names(keep)
    for name in keep_t:
        if name not in d.names:
            raise UnknownVariable(name)
    keep_set = set(keep_t)
    drop = tuple(i for i, n in enumerate(d.names) if n not in keep_set)
    prob = d.prob.sum(axis=drop) if drop else d.prob
    kept = [(n, s) for n, s in zip(d.names, d.rvs.sizes) if n in keep_set]
    rvs = RandomVariableSet(tuple(n for n, _ in kept), tuple(s for _, s in kept))
    return JointDistribution(rvs, prob)


def add_paired_variable(d: JointDistribution, name: str, parts: Names) -> JointDistribution:
    """Append a deterministic variable equal to the tuple of `parts`.

    The new variable has cardinality prod(|part|) and value equal to the
    row-major mixed-radix index of the part values.
    """
    parts_t = _names(parts)
    if name in d.names:
        raise InvalidParameter(f"variable {name!r} already present")
    axes = d.axes_of(parts_t)
    sizes = [d.rvs.sizes[a] for a in axes]
    new_size = int(np.prod(sizes))
    onehot = np.zeros(sizes + [new_size])
    for cell in np.ndindex(*sizes):
        code = 0
        for v, s in zip(cell, sizes):
            code = code * s + v
        onehot[cell + (code,)] = 1.0
    n = len(d.names)
    letters = "abcdefghijklmnopqrstuv"[:n]
    part_letters = "".join(letters[a] for a in axes)
    sub = f"{letters},{part_letters}z->{letters}z"
    prob = np.einsum(sub, d.prob, onehot)
    rvs = RandomVariableSet(d.names + (name,), d.rvs.sizes + (new_size,))
    return JointDistribution(rvs, prob)


# ---------------------------------------------------------------------------
# Information measures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MITerm:
    """Conditional mutual information atom I(left; right | given)."""

    left: tuple[str, ...]
    right: tuple[str, ...]
    given: tuple[str, ...] = ()

    def __post_init__(self):
        left = tuple(sorted(set(_names(self.left))))
        right = tuple(sorted(set(_names(self.right))))
        given = tuple(sorted(set(_names(self.given))))
        if not left or not right:
            raise InvalidParameter("I(A;B|C) needs nonempty A and B")
        overlap = (set(left) & set(right)) | (set(left) & set(given)) | (set(right) & set(given))
        if overlap:
            raise InvalidParameter(f"I(A;B|C) argument sets overlap on {sorted(overlap)}")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "given", given)

    def __str__(self) -> str:
        base = f"I({','.join(self.left)};{','.join(self.right)}"
        return base + (f"|{','.join(self.given)})" if self.given else ")")

    def __add__(self, other):
        return MIExpr.of(self) + other

    def __sub__(self, other):
        return MIExpr.of(self) - other

    def __neg__(self):
        return MIExpr(((-1, self),))


def mi(left: Names, right: Names, given: Names = ()) -> MITerm:
    return MITerm(_names(left), _names(right), _names(given))


@dataclass(frozen=True)
class MIExpr:
    """Signed sum of MI atoms plus a constant, in bits."""

    terms: tuple[tuple[int, MITerm], ...] = ()
    constant: float = 0.0

    @staticmethod
    def of(x) -> "MIExpr":
        if isinstance(x, MIExpr):
            return x
        if isinstance(x, MITerm):
            return MIExpr(((1, x),))
        return MIExpr((), float(x))

    def __add__(self, other):
        o = MIExpr.of(other)
        return MIExpr(self.terms + o.terms, self.constant + o.constant)

    def __sub__(self, other):
        o = MIExpr.of(other)
        neg = tuple((-s, t) for s, t in o.terms)
        return MIExpr(self.terms + neg, self.constant - o.constant)

    def __neg__(self):
        return MIExpr(tuple((-s, t) for s, t in self.terms), -self.constant)

    def variables(self) -> set[str]:
        out: set[str] = set()
        for _, t in self.terms:
            out.update(t.left, t.right, t.given)
        return out

    def __str__(self) -> str:
        if not self.terms:
            return f"{self.constant:g}"
        parts = []
        for i, (s, t) in enumerate(self.terms):
            sign = "-" if s < 0 else ("+" if i else "")
            parts.append(f"{sign} {t}" if i else f"{sign}{t}")
        if self.constant:
            parts.append(f"+ {self.constant:g}")
        return " ".join(parts)


ZERO_EXPR = MIExpr()


def _masked_xlogy(p: np.ndarray, ratio_logs: np.ndarray) -> float:
    mask = p > SUPPORT_EPS
    return float(np.sum(p[mask] * ratio_logs[mask]))


def _marginal_tensor(d: JointDistribution, names: tuple[str, ...]):
    """Marginal over `names` (original axis order), without re-validation."""
    keep = set(names)
    for n in names:
        if n not in d.names:
            raise UnknownVariable(n)
    drop = tuple(i for i, n in enumerate(d.names) if n not in keep)
    p = d.prob.sum(axis=drop) if drop else d.prob
    order = tuple(n for n in d.names if n in keep)
    return p, order


def mutual_information(d: JointDistribution, t: MITerm) -> float:
    """I(A;B|C) in bits; tiny negatives (roundoff) are clamped to zero."""
    p, order = _marginal_tensor(d, t.left + t.right + t.given)
    axL = tuple(i for i, n in enumerate(order) if n in t.left)
    axR = tuple(i for i, n in enumerate(order) if n in t.right)
    with np.errstate(divide="ignore", invalid="ignore"):
        logp = np.log2(np.where(p > 0, p, 1.0))
        pac = p.sum(axis=axR, keepdims=True)
        pbc = p.sum(axis=axL, keepdims=True)
        pc = pac.sum(axis=axL, keepdims=True)
        logs = (
            logp
            + np.log2(np.where(pc > 0, pc, 1.0))
            - np.log2(np.where(pac > 0, pac, 1.0))
            - np.log2(np.where(pbc > 0, pbc, 1.0))
        )
    val = _masked_xlogy(p, np.broadcast_to(logs, p.shape))
    if -MI_CLAMP <= val < 0.0:
        return 0.0
    return val


def entropy(d: JointDistribution, names: Names, given: Names = ()) -> float:
    """H(A|C) in bits."""
    a = _names(names)
    g = tuple(n for n in _names(given) if n not in a)
    p, order = _marginal_tensor(d, a + g)
    axA = tuple(i for i, n in enumerate(order) if n in a)
    with np.errstate(divide="ignore", invalid="ignore"):
        pc = p.sum(axis=axA, keepdims=True)
        logs = np.log2(np.where(pc > 0, pc, 1.0)) - np.log2(np.where(p > 0, p, 1.0))
    val = _masked_xlogy(p, np.broadcast_to(logs, p.shape))
    if -MI_CLAMP <= val < 0.0:
        return 0.0
    return val


def evaluate_expr(d: JointDistribution, e: MIExpr) -> float:
    """Signed sum of the expression's terms plus its constant."""
    return sum(s * mutual_information(d, t) for s, t in e.terms) + e.constant


def check_conditional_independence(
    d: JointDistribution, a: Names, b: Names, given: Names = (), tol: float = 1e-9
) -> bool:
    """True iff I(A;B|C) <= tol."""
    return mutual_information(d, mi(a, b, given)) <= tol


def verify_factorization(d: JointDistribution, spec: FactorizationSpec, tol: float = 1e-9) -> None:
    """Check every conditional independence implied by the factor chain.

    Factor k with targets T and conditioning G implies T independent of the
    earlier targets outside G, given G.  Raises FactorizationViolation
    naming the first violated triple.
    """
    earlier: list[str] = []
    for f in spec.factors:
        rest = [n for n in earlier if n not in f.given]
        if rest:
            value = mutual_information(d, mi(f.targets, rest, f.given))
            if value > tol:
                raise FactorizationViolation(
                    f"I({','.join(f.targets)};{','.join(rest)}"
                    f"|{','.join(f.given)}) = {value:.3e} > {tol:g}"
                )
        earlier.extend(f.targets)


# ---------------------------------------------------------------------------
# Variable renaming / merging on expressions
# ---------------------------------------------------------------------------


def rename_term(t: MITerm, mapping: dict[str, tuple[str, ...]]) -> MITerm | None:
    """Apply a name substitution; names mapped to () are dropped.

    Returns None when the left or right set vanishes (the atom is then
    identically zero).
    """

    def sub(names: tuple[str, ...]) -> tuple[str, ...]:
        out: list[str] = []
        for n in names:
            out.extend(mapping.get(n, (n,)))
        return tuple(dict.fromkeys(out))

    left, right, given = sub(t.left), sub(t.right), sub(t.given)
    if not left or not right:
        return None
    return MITerm(left, right, given)


def rename_expr(e: MIExpr, mapping: dict[str, tuple[str, ...]]) -> MIExpr:
    terms = []
    for s, t in e.terms:
        rt = rename_term(t, mapping)
        if rt is not None:
            terms.append((s, rt))
    return MIExpr(tuple(terms), e.constant)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def joint_to_json(d: JointDistribution) -> dict:
    return {
        "names": list(d.names),
        "sizes": list(d.rvs.sizes),
        "p": [float(v) for v in d.prob.reshape(-1)],
    }


def joint_from_json(obj: dict) -> JointDistribution:
    try:
        names = tuple(obj["names"])
        sizes = tuple(int(s) for s in obj["sizes"])
        flat = obj["p"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidParameter(f"malformed distribution object: {exc}") from exc
    expected = int(np.prod(sizes)) if sizes else 1
    if len(flat) != expected:
        raise InvalidParameter(f"field 'p' has length {len(flat)}, expected {expected}")
    rvs = RandomVariableSet(names, sizes)
    return JointDistribution(rvs, np.asarray(flat, dtype=float).reshape(sizes))


def save_joint(d: JointDistribution, path: str | Path) -> None:
    Path(path).write_text(json.dumps(joint_to_json(d), sort_keys=True))


def load_joint(path: str | Path) -> JointDistribution:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidParameter(f"{path}: not valid JSON: {exc}") from exc
    return joint_from_json(obj)
