"""Koszul complexes over multivariate polynomial rings, and exact graded
homology by degree truncation.

The ring layer is deliberately small: sparse multivariate polynomials with
exact rational coefficients over an ordered list of variables, each of
quantum degree 2.  On top of it live Koszul complexes (lists of rows),
their expansions into complexes of free graded modules, gluing, mark
removal with transport data, change of basis, mapping cones, twisted
complexes with convolutions, Gaussian elimination with explicit retract
data, and a slice engine computing homology dimensions (with stored
representatives) per quantum degree.
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .diagram import InputError

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as _Q

__all__ = [
    "GradedRing",
    "Poly",
    "KoszulRow",
    "KoszulComplex",
    "FreeComplex",
    "ChainMap",
    "ChainMapData",
    "TwistedComplex",
    "MarkSDR",
    "SDR",
    "HomologyTable",
    "koszul_arc",
    "koszul_vertex",
    "koszul_virtual",
    "virtual_rows",
    "glue",
    "tensor_free",
    "tensor_map",
    "direct_sum",
    "mark_removal",
    "mark_removal_sdr",
    "change_of_basis",
    "to_free",
    "identity_map",
    "graded_homology",
    "cone",
    "convolution",
    "gaussian_eliminate",
    "gaussian_sdr",
    "twisted_retract",
    "virtual_saddle",
]

_ZERO = _Q(0)
_ONE = _Q(1)


# -- rings and polynomials ---------------------------------------------------


@dataclass(frozen=True)
class GradedRing:
    """Polynomial ring descriptor; every variable has quantum degree 2."""

    variables: tuple[str, ...]
    internal: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "internal", frozenset(self.internal))
        if len(set(self.variables)) != len(self.variables):
            raise InputError(f"duplicate ring variables in {self.variables}")
        if not self.internal <= set(self.variables):
            raise InputError("internal names missing from the ring")

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise InputError(f"no ring variable {name!r}") from None

    def var(self, name: str) -> Poly:
        exps = [0] * len(self.variables)
        exps[self.index(name)] = 1
        return Poly(self, {tuple(exps): _ONE})

    def const(self, c) -> Poly:
        c = _Q(c)
        zero = (0,) * len(self.variables)
        return Poly(self, {zero: c} if c else {})

    def zero(self) -> Poly:
        return Poly(self, {})

    def mark_internal(self, names: Iterable[str]) -> GradedRing:
        names = frozenset(names)
        if not names <= set(self.variables):
            raise InputError("cannot mark unknown variables internal")
        return GradedRing(self.variables, self.internal | names)

    def pushout(self, other: GradedRing, shared: Iterable[str]) -> GradedRing:
        shared = frozenset(shared)
        overlap = set(self.variables) & set(other.variables)
        if overlap - shared:
            raise InputError(
                f"variable collision outside shared set: {sorted(overlap - shared)}"
            )
        if not shared <= overlap:
            raise InputError("shared variables must occur in both rings")
        merged = self.variables + tuple(
            v for v in other.variables if v not in shared
        )
        return GradedRing(merged, self.internal | other.internal | shared)

    def drop(self, name: str) -> GradedRing:
        i = self.index(name)
        return GradedRing(
            self.variables[:i] + self.variables[i + 1 :],
            self.internal - {name},
        )


class Poly:
    """Sparse polynomial with exact rational coefficients.

    Immutable by convention; ``terms`` maps exponent tuples (aligned with
    ``ring.variables``) to nonzero coefficients.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: GradedRing, terms: Mapping[tuple, object]):
        self.ring = ring
        self.terms = {e: _Q(c) for e, c in terms.items() if c}

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poly)
            and self.ring.variables == other.ring.variables
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring.variables, tuple(sorted(self.terms.items()))))

    def __add__(self, other: Poly) -> Poly:
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, _ZERO) + c
        return Poly(self.ring, out)

    def __neg__(self) -> Poly:
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            c = _Q(other)
            return Poly(self.ring, {e: v * c for e, v in self.terms.items()})
        out: dict[tuple, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, _ZERO) + c1 * c2
        return Poly(self.ring, out)

    __rmul__ = __mul__

    @property
    def q_degree(self) -> int:
        """Quantum degree; defined for homogeneous polynomials only."""
        degs = {2 * sum(e) for e in self.terms}
        if not degs:
            return 0
        if len(degs) != 1:
            raise InputError("polynomial is not homogeneous")
        return degs.pop()

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self):
        if not self.terms:
            return _ZERO
        ((e, c),) = self.terms.items()
        if sum(e):
            raise InputError("not a constant")
        return c

    def degree_in(self, name: str) -> int:
        i = self.ring.index(name)
        return max((e[i] for e in self.terms), default=0)

    def coefficient_of(self, name: str, power: int) -> Poly:
        """INPUT: a variable name and an exponent.
        OUTPUT: the coefficient of name**power, with that variable's
        exponent zeroed out (same ring)."""
        i = self.ring.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i] == power:
                out[e[:i] + (0,) + e[i + 1 :]] = c
        return Poly(self.ring, out)

    def embed(self, ring: GradedRing) -> Poly:
        """Reinterpret over a larger ring, matching variables by name."""
        if ring.variables == self.ring.variables:
            return Poly(ring, self.terms)
        idx = [ring.index(v) for v in self.ring.variables]
        width = len(ring.variables)
        out: dict[tuple, object] = {}
        for e, c in self.terms.items():
            new = [0] * width
            for j, k in zip(idx, e):
                new[j] = k
            key = tuple(new)
            out[key] = out.get(key, _ZERO) + c
        return Poly(ring, out)

    def eliminate(self, name: str, replacement: Poly) -> Poly:
        """Substitute ``name`` by ``replacement``, over the ring without it."""
        reduced = self.ring.drop(name)
        if replacement.ring.variables != reduced.variables:
            replacement = replacement.embed(reduced)
        i = self.ring.index(name)
        out = reduced.zero()
        powers: dict[int, Poly] = {0: reduced.const(1)}
        for e, c in self.terms.items():
            k = e[i]
            while k not in powers:
                powers[len(powers)] = powers[len(powers) - 1] * replacement
            rest = e[:i] + e[i + 1 :]
            out = out + powers[k] * Poly(reduced, {rest: c})
        return out

    def split_linear(self, name: str) -> tuple[Poly, Poly]:
        """Write self = g*name + r; requires at most linear occurrence."""
        if self.degree_in(name) > 1:
            raise InputError(f"{name} appears nonlinearly")
        return self.coefficient_of(name, 1), self.coefficient_of(name, 0)

    def dumps(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(
                f"{v}^{k}" if k > 1 else v
                for v, k in zip(self.ring.variables, e)
                if k
            )
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)

    def __repr__(self):
        return f"Poly({self.dumps()})"


def _div_linear(f: Poly, z: str, repl: Poly) -> Poly:
    """Quotient g in f = g·(z − repl) + f|_{z=repl}."""
    ring = f.ring
    rem = f.eliminate(z, repl).embed(ring)
    num = f - rem
    linear = ring.var(z) - repl.embed(ring)
    quot = ring.zero()
    while num:
        k = num.degree_in(z)
        if k == 0:
            raise InputError("division by z - p failed")
        zpow = ring.const(1)
        for _ in range(k - 1):
            zpow = zpow * ring.var(z)
        piece = num.coefficient_of(z, k) * zpow
        quot = quot + piece
        num = num - piece * linear
    return quot


# -- free complexes ----------------------------------------------------------


def _compose(a: Mapping[tuple, Poly], b: Mapping[tuple, Poly]) -> dict:
    """Sparse matrix product a∘b (apply b first)."""
    by_col: dict[int, list[tuple[int, Poly]]] = {}
    for (r, c), p in a.items():
        by_col.setdefault(c, []).append((r, p))
    out: dict[tuple, Poly] = {}
    for (mid, src), p in b.items():
        for r, q in by_col.get(mid, ()):
            key = (r, src)
            prod = q * p
            out[key] = out[key] + prod if key in out else prod
    return {k: v for k, v in out.items() if v}


def _mat_sub(a: Mapping[tuple, Poly], b: Mapping[tuple, Poly]) -> dict:
    out = dict(a)
    for k, p in b.items():
        out[k] = out[k] - p if k in out else -p
    return {k: v for k, v in out.items() if v}


@dataclass(frozen=True)
class FreeComplex:
    """Complex of free graded modules with polynomial differentials.

    ``modules[i]`` lists the (q, a) shifts of the generators at homological
    position ``start + i``; ``diffs[i]`` maps position ``start+i+1`` to
    ``start+i`` with entries keyed ``(target_gen, source_gen)``.  On
    construction d∘d = 0 and q-homogeneity of every entry are verified.
    """

    ring: GradedRing
    start: int
    modules: tuple[tuple[tuple[int, int], ...], ...]
    diffs: tuple[Mapping[tuple, Poly], ...]

    def __post_init__(self):
        if len(self.diffs) != max(len(self.modules) - 1, 0):
            raise InputError("differential count does not match positions")
        for i, diff in enumerate(self.diffs):
            src = self.modules[i + 1]
            tgt = self.modules[i]
            for (r, c), p in diff.items():
                if not (0 <= r < len(tgt) and 0 <= c < len(src)):
                    raise InputError("differential entry out of range")
                if p and p.q_degree != src[c][0] - tgt[r][0]:
                    raise InputError(
                        f"inhomogeneous entry at position {self.start + i}: "
                        f"{p.dumps()} between shifts {src[c]} and {tgt[r]}"
                    )
        for i in range(len(self.diffs) - 1):
            if _compose(self.diffs[i], self.diffs[i + 1]):
                raise InputError(f"d^2 != 0 at position {self.start + i + 2}")

    @property
    def positions(self) -> range:
        return range(self.start, self.start + len(self.modules))

    def module(self, p: int) -> tuple[tuple[int, int], ...]:
        if p in self.positions:
            return self.modules[p - self.start]
        return ()

    def diff(self, p: int) -> Mapping[tuple, Poly]:
        """The differential leaving position p (towards p − 1)."""
        i = p - self.start - 1
        if 0 <= i < len(self.diffs):
            return self.diffs[i]
        return {}

    def rank(self, p: int) -> int:
        return len(self.module(p))

    def total_rank(self) -> int:
        return sum(len(m) for m in self.modules)

    @property
    def a_step(self) -> Optional[int]:
        """Uniform drop in Hochschild degree along the differential."""
        steps = set()
        for i, diff in enumerate(self.diffs):
            for (r, c), p in diff.items():
                if p:
                    steps.add(self.modules[i + 1][c][1] - self.modules[i][r][1])
        if not steps:
            return 1
        return steps.pop() if len(steps) == 1 else None

    def shifted(self, q: int = 0, a: int = 0) -> FreeComplex:
        mods = tuple(
            tuple((s + q, t + a) for s, t in gens) for gens in self.modules
        )
        return FreeComplex(self.ring, self.start, mods, self.diffs)

    def to_json(self) -> str:
        data = {
            "variables": list(self.ring.variables),
            "internal": sorted(self.ring.internal),
            "start": self.start,
            "modules": [[list(g) for g in gens] for gens in self.modules],
            "diffs": [
                {f"{r},{c}": p.dumps() for (r, c), p in sorted(diff.items())}
                for diff in self.diffs
            ],
        }
        return json.dumps(data, sort_keys=True)


def direct_sum(a: FreeComplex, b: FreeComplex) -> FreeComplex:
    if a.ring.variables != b.ring.variables:
        raise InputError("direct sum needs a common ring")
    lo = min(a.start, b.start)
    hi = max(a.start + len(a.modules), b.start + len(b.modules)) - 1
    mods = [a.module(p) + b.module(p) for p in range(lo, hi + 1)]
    diffs = []
    for p in range(lo + 1, hi + 1):
        d = dict(a.diff(p))
        off_t = len(a.module(p - 1))
        off_s = len(a.module(p))
        for (r, c), poly in b.diff(p).items():
            d[(r + off_t, c + off_s)] = poly
        diffs.append(d)
    return FreeComplex(a.ring, lo, tuple(mods), tuple(diffs))


def tensor_free(
    a: FreeComplex, b: FreeComplex, shared: Iterable[str] = ()
) -> FreeComplex:
    """Tensor product with the alternating sign on the right factor's
    differential; shared variables become internal."""
    ring = a.ring.pushout(b.ring, shared)
    lo = a.start + b.start
    hi = (a.start + len(a.modules) - 1) + (b.start + len(b.modules) - 1)
    index: dict[int, list[tuple[int, int, int, int]]] = {}
    mods = []
    for p in range(lo, hi + 1):
        gens = []
        pairs = []
        for pa in a.positions:
            pb = p - pa
            for ia, (qa, aa) in enumerate(a.module(pa)):
                for ib, (qb, ab) in enumerate(b.module(pb)):
                    pairs.append((pa, ia, pb, ib))
                    gens.append((qa + qb, aa + ab))
        index[p] = pairs
        mods.append(tuple(gens))
    pos_of = {p: {pair: i for i, pair in enumerate(index[p])} for p in index}
    diffs = []
    for p in range(lo + 1, hi + 1):
        d: dict[tuple, Poly] = {}
        for ci, (pa, ia, pb, ib) in enumerate(index[p]):
            for (r, c), poly in a.diff(pa).items():
                if c == ia:
                    key = (pos_of[p - 1][(pa - 1, r, pb, ib)], ci)
                    val = poly.embed(ring)
                    d[key] = d[key] + val if key in d else val
            sign = -1 if pa % 2 else 1
            for (r, c), poly in b.diff(pb).items():
                if c == ib:
                    key = (pos_of[p - 1][(pa, ia, pb - 1, r)], ci)
                    val = poly.embed(ring) * sign
                    d[key] = d[key] + val if key in d else val
        diffs.append({k: v for k, v in d.items() if v})
    return FreeComplex(ring, lo, tuple(mods), tuple(diffs))


# -- Koszul complexes --------------------------------------------------------


@dataclass(frozen=True)
class KoszulRow:
    poly: Poly
    q_shift: int
    a_shift: int = 1


@dataclass(frozen=True)
class KoszulComplex:
    """Koszul complex of a sequence of ring elements.

    Each row contributes a two-term factor q^{q_shift} a^{a_shift} R → R;
    the global shift is a unit monomial recorded as (q, a, t) exponents.
    """

    ring: GradedRing
    rows: tuple[KoszulRow, ...]
    shift: tuple[int, int, int] = (0, 0, 0)

    @staticmethod
    def from_polys(ring: GradedRing, polys: Sequence[Poly]) -> KoszulComplex:
        rows = tuple(KoszulRow(p, p.q_degree if p else 2, 1) for p in polys)
        return KoszulComplex(ring, rows)

    def with_shift(self, q: int = 0, a: int = 0, t: int = 0) -> KoszulComplex:
        s = self.shift
        return KoszulComplex(self.ring, self.rows, (s[0] + q, s[1] + a, s[2] + t))


@functools.lru_cache(maxsize=None)
def _subsets(m: int, k: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.combinations(range(m), k))


@functools.lru_cache(maxsize=None)
def _subset_pos(m: int, k: int) -> dict:
    return {S: i for i, S in enumerate(_subsets(m, k))}


def to_free(k: KoszulComplex) -> FreeComplex:
    """Expand the tensor of rows into an explicit free complex.

    Position j holds one generator per j-element subset S of the rows, in
    lexicographic order, with shift the sum of the row shifts over S; the
    differential sends e_S to Σ_{i∈S} (−1)^{#{j∈S: j<i}} p_i · e_{S∖i}.
    """
    m = len(k.rows)
    gq, ga, _ = k.shift
    mods = []
    for j in range(m + 1):
        gens = []
        for S in _subsets(m, j):
            q = sum(k.rows[i].q_shift for i in S) + gq
            a = sum(k.rows[i].a_shift for i in S) + ga
            gens.append((q, a))
        mods.append(tuple(gens))
    diffs = []
    for j in range(1, m + 1):
        tgt_pos = _subset_pos(m, j - 1)
        d: dict[tuple, Poly] = {}
        for ci, S in enumerate(_subsets(m, j)):
            for pos, i in enumerate(S):
                rest = S[:pos] + S[pos + 1 :]
                poly = k.rows[i].poly
                if not poly:
                    continue
                d[(tgt_pos[rest], ci)] = poly if pos % 2 == 0 else -poly
        diffs.append(d)
    return FreeComplex(k.ring, 0, tuple(mods), tuple(diffs))


def koszul_arc(x: str = "x", y: str = "y") -> KoszulComplex:
    """The arc complex q²a·R → R over Q[x, y] with differential y − x."""
    ring = GradedRing((x, y))
    return KoszulComplex.from_polys(ring, [ring.var(y) - ring.var(x)])


def koszul_vertex(
    x1: str = "x1", x2: str = "x2", y1: str = "y1", y2: str = "y2"
) -> KoszulComplex:
    """The wide-edge complex with rows y1+y2−x1−x2 and (y1−x1)(y1−x2)."""
    ring = GradedRing((x1, x2, y1, y2))
    vx1, vx2, vy1, vy2 = (ring.var(v) for v in (x1, x2, y1, y2))
    return KoszulComplex.from_polys(
        ring, [vy1 + vy2 - vx1 - vx2, (vy1 - vx1) * (vy1 - vx2)]
    )


def virtual_rows(
    ring: GradedRing,
    x1: str,
    x2: str,
    y1: str,
    y2: str,
    marking: str = "uniform",
) -> tuple[KoszulRow, KoszulRow]:
    """Rows (y1−x2, y2−x1) of a virtual crossing; the ``literal`` marking
    drops the Hochschild markers, leaving pure q-shifts."""
    if marking not in ("uniform", "literal"):
        raise InputError(f"unknown virtual marking {marking!r}")
    a = 1 if marking == "uniform" else 0
    p1 = ring.var(y1) - ring.var(x2)
    p2 = ring.var(y2) - ring.var(x1)
    return (KoszulRow(p1, 2, a), KoszulRow(p2, 2, a))


def koszul_virtual(
    x1: str = "x1",
    x2: str = "x2",
    y1: str = "y1",
    y2: str = "y2",
    marking: str = "uniform",
) -> FreeComplex:
    """Expanded complex of a virtual crossing: the transposed arc pair."""
    ring = GradedRing((x1, x2, y1, y2))
    rows = virtual_rows(ring, x1, x2, y1, y2, marking)
    return to_free(KoszulComplex(ring, rows))


def glue(a, b, shared: Iterable[str] = ()):
    """Join two complexes over shared variables, which become internal.

    Koszul complexes concatenate rows over the pushout ring; free
    complexes tensor.  An empty shared set is disjoint union.
    """
    if isinstance(a, FreeComplex) and isinstance(b, FreeComplex):
        return tensor_free(a, b, shared)
    if not (isinstance(a, KoszulComplex) and isinstance(b, KoszulComplex)):
        raise InputError("glue needs two complexes of the same kind")
    ring = a.ring.pushout(b.ring, shared)
    rows = tuple(
        KoszulRow(r.poly.embed(ring), r.q_shift, r.a_shift)
        for r in a.rows + b.rows
    )
    return KoszulComplex(
        ring, rows, tuple(x + y for x, y in zip(a.shift, b.shift))
    )


def change_of_basis(c: KoszulComplex, i: int, j: int, lam) -> KoszulComplex:
    """Row operation p_i ← p_i + λ·p_j (λ rational or a ring element)."""
    if i == j:
        raise InputError("change_of_basis needs distinct rows")
    if not (0 <= i < len(c.rows) and 0 <= j < len(c.rows)):
        raise InputError("row index out of range")
    lam_poly = lam if isinstance(lam, Poly) else c.ring.const(lam)
    new_poly = c.rows[i].poly + lam_poly.embed(c.ring) * c.rows[j].poly
    rows = list(c.rows)
    rows[i] = KoszulRow(new_poly, c.rows[i].q_shift, c.rows[i].a_shift)
    return KoszulComplex(c.ring, tuple(rows), c.shift)


def _removal_site(c: KoszulComplex, z: str) -> tuple[int, Poly]:
    """Locate a row of the form ±(z − p) with p free of z."""
    if z not in c.ring.internal:
        raise InputError(f"{z} is not an internal variable")
    for i, row in enumerate(c.rows):
        try:
            g, r = row.poly.split_linear(z)
        except InputError:
            continue
        if not g.is_constant() or g.constant_value() not in (_ONE, -_ONE):
            continue
        sign = g.constant_value()
        repl = (r * (-1 / sign)).eliminate(z, c.ring.drop(z).zero())
        return i, repl
    raise InputError(f"not-removable: no row isolates {z}")


def mark_removal(c: KoszulComplex, z: str) -> KoszulComplex:
    """Delete a row ±(z − p) and substitute z by p everywhere else."""
    i, repl = _removal_site(c, z)
    ring = c.ring.drop(z)
    rows = []
    for j, row in enumerate(c.rows):
        if j == i:
            continue
        rows.append(
            KoszulRow(row.poly.eliminate(z, repl), row.q_shift, row.a_shift)
        )
    return KoszulComplex(ring, tuple(rows), c.shift)


class MarkSDR:
    """Transport data for one mark removal.

    Vectors are dicts keyed by row-index subsets of the respective complex
    with polynomial values.  ``down`` projects the original expanded
    complex onto the reduced one (substitute, then drop subsets through
    the removed row); ``up`` includes reduced vectors back, with the
    correction terms that make the inclusion a chain map.  Both are chain
    maps and down∘up is the identity.
    """

    def __init__(self, src: KoszulComplex, z: str):
        self.src = src
        self.z = z
        site, repl = _removal_site(src, z)
        self.site = site
        self.repl = repl
        self.sigma = src.rows[site].poly.coefficient_of(z, 1).constant_value()
        self.residues: dict[int, Poly] = {}
        for i, row in enumerate(src.rows):
            if i == site:
                continue
            g = _div_linear(row.poly, z, repl)
            if g:
                self.residues[i] = g
        self.reduced = mark_removal(src, z)
        self.old_index = [i for i in range(len(src.rows)) if i != site]
        self._new_of_old = {o: n for n, o in enumerate(self.old_index)}

    def down(self, vec: Mapping[tuple, Poly]) -> dict[tuple, Poly]:
        out: dict[tuple, Poly] = {}
        for S, poly in vec.items():
            if self.site in S:
                continue
            key = tuple(self._new_of_old[i] for i in S)
            val = poly.eliminate(self.z, self.repl)
            if not val:
                continue
            out[key] = out[key] + val if key in out else val
        return {k: v for k, v in out.items() if v}

    def up(self, vec: Mapping[tuple, Poly]) -> dict[tuple, Poly]:
        big = self.src.ring
        out: dict[tuple, Poly] = {}

        def add(key, val):
            if val:
                out[key] = out[key] + val if key in out else val

        for T, poly in vec.items():
            S = tuple(self.old_index[i] for i in T)
            p = poly.embed(big)
            add(S, p)
            for pos, i in enumerate(S):
                g = self.residues.get(i)
                if g is None:
                    continue
                rest = S[:pos] + S[pos + 1 :]
                t = sum(1 for j in rest if j < self.site)
                sgn = -1 if (pos - t) % 2 else 1
                key = tuple(sorted(rest + (self.site,)))
                add(key, p * g * (-sgn / self.sigma))
        return {k: v for k, v in out.items() if v}


def mark_removal_sdr(c: KoszulComplex, z: str) -> tuple[KoszulComplex, MarkSDR]:
    sdr = MarkSDR(c, z)
    return sdr.reduced, sdr


# -- chain maps and cones ----------------------------------------------------


@dataclass(frozen=True)
class ChainMap:
    """Map between free complexes, stored per source position.

    ``degree`` is the homological position shift of the image (0 for an
    ordinary chain map, −1 for a saddle-type map); ``blocks[p]`` maps
    position p of ``src`` to position p + degree of ``tgt``.  The relation
    d∘f = f∘d is verified on construction.
    """

    src: FreeComplex
    tgt: FreeComplex
    degree: int
    blocks: Mapping[int, Mapping[tuple, Poly]]

    def __post_init__(self):
        if self.src.ring.variables != self.tgt.ring.variables:
            raise InputError("chain map needs a common ring")
        for p, block in self.blocks.items():
            src = self.src.module(p)
            tgt = self.tgt.module(p + self.degree)
            for (r, c), poly in block.items():
                if not (0 <= r < len(tgt) and 0 <= c < len(src)):
                    raise InputError("chain map block out of range")
                if poly and poly.q_degree != src[c][0] - tgt[r][0]:
                    raise InputError("inhomogeneous chain map entry")
        for p in self.src.positions:
            left = _compose(self.tgt.diff(p + self.degree), self.block(p))
            right = _compose(self.block(p - 1), self.src.diff(p))
            if _mat_sub(left, right):
                raise InputError(f"chain map fails to commute at position {p}")

    def block(self, p: int) -> Mapping[tuple, Poly]:
        return self.blocks.get(p, {})


def identity_map(c: FreeComplex) -> ChainMap:
    blocks = {
        p: {(i, i): c.ring.const(1) for i in range(c.rank(p))}
        for p in c.positions
    }
    return ChainMap(c, c, 0, blocks)


def cone(f: ChainMap) -> FreeComplex:
    """Mapping cone.

    A degree −1 map keeps both sides at their own homological positions
    (the target differential is negated); a degree 0 map pushes the source
    up by one position and one Hochschild degree first, so the result
    keeps a uniform Hochschild step.
    """
    if f.degree == -1:
        src, tgt = f.src, f.tgt
        bump = 0
    elif f.degree == 0:
        src, tgt = f.src.shifted(a=1), f.tgt
        bump = 1
    else:
        raise InputError("cone supports degrees 0 and -1 only")
    conn = {p + bump: f.block(p) for p in f.src.positions}
    lo = min(tgt.start, src.start + bump)
    hi = max(
        tgt.start + len(tgt.modules) - 1,
        src.start + len(src.modules) - 1 + bump,
    )
    mods = []
    for p in range(lo, hi + 1):
        mods.append(tgt.module(p) + src.module(p - bump))
    diffs = []
    for p in range(lo + 1, hi + 1):
        d: dict[tuple, Poly] = {}
        for (r, c), poly in tgt.diff(p).items():
            d[(r, c)] = -poly
        off_t = len(tgt.module(p - 1))
        off_s = len(tgt.module(p))
        for (r, c), poly in src.diff(p - bump).items():
            d[(r + off_t, c + off_s)] = poly
        for (r, c), poly in conn.get(p, {}).items():
            key = (r, c + off_s)
            d[key] = d[key] + poly if key in d else poly
        diffs.append({k: v for k, v in d.items() if v})
    return FreeComplex(tgt.ring, lo, tuple(mods), tuple(diffs))


def tensor_map(f: ChainMap, g: ChainMap, shared: Iterable[str] = ()) -> ChainMap:
    """Tensor two chain maps; at most one factor may have degree -1.

    The source and target are built with :func:`tensor_free`, so the
    generator order matches complexes produced there.  When the left
    factor drops homological position it passes the Koszul sign on the
    right differential, compensated by (-1)^(right position).
    """
    if f.degree and g.degree:
        raise InputError("tensor_map supports at most one degree -1 factor")
    src = tensor_free(f.src, g.src, shared)
    tgt = tensor_free(f.tgt, g.tgt, shared)
    ring = src.ring

    def pairs(a: FreeComplex, b: FreeComplex, p: int):
        out = []
        for pa in a.positions:
            pb = p - pa
            for ia in range(a.rank(pa)):
                for ib in range(b.rank(pb)):
                    out.append((pa, ia, pb, ib))
        return out

    tgt_pos = {
        p: {pair: i for i, pair in enumerate(pairs(f.tgt, g.tgt, p))}
        for p in tgt.positions
    }
    deg = f.degree + g.degree
    blocks: dict[int, dict] = {}
    for p in src.positions:
        blk: dict[tuple, Poly] = {}
        for ci, (pa, ia, pb, ib) in enumerate(pairs(f.src, g.src, p)):
            for (r, c), pf in f.block(pa).items():
                if c != ia:
                    continue
                for (r2, c2), pg in g.block(pb).items():
                    if c2 != ib:
                        continue
                    key = (tgt_pos[p + deg][(pa + f.degree, r, pb + g.degree, r2)], ci)
                    val = pf.embed(ring) * pg.embed(ring)
                    if f.degree and pb % 2:
                        val = -val
                    blk[key] = blk[key] + val if key in blk else val
        blk = {k: v for k, v in blk.items() if v}
        if blk:
            blocks[p] = blk
    return ChainMap(src, tgt, deg, blocks)


def virtual_saddle(direction: str, ring: Optional[GradedRing] = None) -> ChainMap:
    """The two saddle maps between the arc-pair and virtual complexes.

    INPUT: direction "to_virtual" (arc pair → q²·virtual) or "to_arcs"
    (virtual → q²·arc pair); optionally a ring whose first four variables
    play the roles x1, x2, y1, y2.
    OUTPUT: the degree −1 chain map with constant components
    e12 ↦ e1 + e2, e1 ↦ −e∅, e2 ↦ e∅.
    """
    ring = ring or GradedRing(("x1", "x2", "y1", "y2"))
    x1, x2, y1, y2 = ring.variables[:4]
    arcs = KoszulComplex.from_polys(
        ring, [ring.var(y1) - ring.var(x1), ring.var(y2) - ring.var(x2)]
    )
    vir = KoszulComplex(ring, virtual_rows(ring, x1, x2, y1, y2))
    if direction == "to_virtual":
        src, tgt = to_free(arcs), to_free(vir).shifted(q=2)
    elif direction == "to_arcs":
        src, tgt = to_free(vir), to_free(arcs).shifted(q=2)
    else:
        raise InputError(f"unknown saddle direction {direction!r}")
    one = ring.const(1)
    blocks = {
        2: {(0, 0): one, (1, 0): one},
        1: {(0, 0): -one, (0, 1): one},
    }
    return ChainMap(src, tgt, -1, blocks)


# -- twisted complexes and convolutions --------------------------------------


@dataclass(frozen=True)
class ChainMapData:
    """Raw blocks of a twisted-complex map, keyed by source position; each
    block lands one homological position lower in the target
    constituent."""

    blocks: Mapping[int, Mapping[tuple, Poly]]

    def block(self, p: int) -> Mapping[tuple, Poly]:
        return self.blocks.get(p, {})


@dataclass(frozen=True)
class TwistedComplex:
    """Constituents C_0..C_n with maps f_{ji} for j > i; the convolution
    carries diagonal (−1)^i d_i with the maps below it, and the data must
    make that total differential square to zero (the one-sided
    Maurer–Cartan condition)."""

    constituents: tuple[FreeComplex, ...]
    maps: Mapping[tuple, ChainMapData]

    def __post_init__(self):
        for (j, i) in self.maps:
            if not (0 <= i < j < len(self.constituents)):
                raise InputError(f"bad twisted map index {(j, i)}")
        convolution(self)


def convolution(t: TwistedComplex) -> FreeComplex:
    """Total complex of a twisted complex; raises when the data fails
    d² = 0."""
    parts = t.constituents
    ring = parts[0].ring
    for c in parts[1:]:
        if c.ring.variables != ring.variables:
            raise InputError("twisted constituents need a common ring")
    lo = min(c.start for c in parts)
    hi = max(c.start + len(c.modules) - 1 for c in parts)
    offsets: dict[int, dict[int, int]] = {}
    mods = []
    for p in range(lo, hi + 1):
        off = {}
        gens: list[tuple[int, int]] = []
        for i, c in enumerate(parts):
            off[i] = len(gens)
            gens.extend(c.module(p))
        offsets[p] = off
        mods.append(tuple(gens))
    diffs = []
    for p in range(lo + 1, hi + 1):
        d: dict[tuple, Poly] = {}
        for i, c in enumerate(parts):
            sign = -1 if i % 2 else 1
            for (r, cc), poly in c.diff(p).items():
                d[(offsets[p - 1][i] + r, offsets[p][i] + cc)] = poly * sign
        for (j, i), data in t.maps.items():
            for (r, cc), poly in data.block(p).items():
                key = (offsets[p - 1][j] + r, offsets[p][i] + cc)
                d[key] = d[key] + poly if key in d else poly
        diffs.append({k: v for k, v in d.items() if v})
    try:
        return FreeComplex(ring, lo, tuple(mods), tuple(diffs))
    except InputError as err:
        raise InputError(f"twisted condition violated: {err}") from None


# -- Gaussian elimination ----------------------------------------------------


class SDR:
    """Strong-deformation-retract data between free complexes.

    ``down`` (projection) and ``up`` (inclusion) are per-position sparse
    matrix families and chain maps with down∘up = Id; ``h`` is the degree
    +1 homotopy on the source with up∘down = d∘h + h∘d + Id.
    """

    def __init__(self, src: FreeComplex, tgt: FreeComplex, down, up, h):
        self.src = src
        self.tgt = tgt
        self.down = down
        self.up = up
        self.h = h


def _identity_family(c: FreeComplex) -> dict:
    return {
        p: {(i, i): c.ring.const(1) for i in range(c.rank(p))}
        for p in c.positions
    }


def _find_unit(c: FreeComplex):
    for p in c.positions:
        for (r, cc), poly in sorted(c.diff(p).items()):
            if poly.is_constant() and poly.constant_value():
                return p, r, cc, poly.constant_value()
    return None


def _eliminate_once(c: FreeComplex, p: int, r: int, cc: int, phi):
    """One elimination step: drop source generator cc at position p and
    target generator r at p − 1; the surviving block picks up the
    correction −μ φ⁻¹ λ."""
    ring = c.ring
    inv = 1 / phi
    src_keep = [i for i in range(c.rank(p)) if i != cc]
    tgt_keep = [i for i in range(c.rank(p - 1)) if i != r]
    src_pos = {old: new for new, old in enumerate(src_keep)}
    tgt_pos = {old: new for new, old in enumerate(tgt_keep)}
    d_p = c.diff(p)
    lam = {i: d_p[(r, i)] for i in src_keep if d_p.get((r, i))}
    mu = {j: d_p[(j, cc)] for j in tgt_keep if d_p.get((j, cc))}
    mods = []
    for q in c.positions:
        if q == p:
            mods.append(tuple(c.module(q)[i] for i in src_keep))
        elif q == p - 1:
            mods.append(tuple(c.module(q)[i] for i in tgt_keep))
        else:
            mods.append(c.module(q))
    diffs = []
    for q in c.positions:
        if q == c.start:
            continue
        d = c.diff(q)
        if q == p:
            nd: dict[tuple, Poly] = {}
            for (j, i), poly in d.items():
                if j == r or i == cc:
                    continue
                nd[(tgt_pos[j], src_pos[i])] = poly
            for i, li in lam.items():
                for j, mj in mu.items():
                    key = (tgt_pos[j], src_pos[i])
                    corr = mj * li * (-inv)
                    nd[key] = nd[key] + corr if key in nd else corr
            nd = {k: v for k, v in nd.items() if v}
        elif q == p + 1:
            nd = {
                (src_pos[j], i): poly for (j, i), poly in d.items() if j != cc
            }
        elif q == p - 1:
            nd = {
                (j, tgt_pos[i]): poly for (j, i), poly in d.items() if i != r
            }
        else:
            nd = dict(d)
        diffs.append(nd)
    reduced = FreeComplex(ring, c.start, tuple(mods), tuple(diffs))
    down, up = {}, {}
    one = ring.const(1)
    for q in c.positions:
        if q == p:
            down[q] = {(src_pos[i], i): one for i in src_keep}
            upq = {(i, src_pos[i]): one for i in src_keep}
            for i, li in lam.items():
                upq[(cc, src_pos[i])] = li * (-inv)
            up[q] = upq
        elif q == p - 1:
            dq = {(tgt_pos[j], j): one for j in tgt_keep}
            for j, mj in mu.items():
                dq[(tgt_pos[j], r)] = mj * (-inv)
            down[q] = dq
            up[q] = {(j, tgt_pos[j]): one for j in tgt_keep}
        else:
            ident = {(i, i): one for i in range(c.rank(q))}
            down[q] = ident
            up[q] = dict(ident)
    h1 = {p - 1: {(cc, r): ring.const(-inv)}}
    return reduced, down, up, h1


def _mat_chain(
    a: Mapping[int, Mapping], b: Mapping[int, Mapping], shift_b: int = 0
) -> dict:
    """Compose per-position families: (a∘b)(p) = a(p + shift_b)∘b(p)."""
    out = {}
    for p, blk in b.items():
        res = _compose(a.get(p + shift_b, {}), blk)
        if res:
            out[p] = res
    return out


def _fam_add(a: dict, b: dict) -> dict:
    out = {p: dict(blk) for p, blk in a.items()}
    for p, blk in b.items():
        if p not in out:
            out[p] = dict(blk)
            continue
        merged = out[p]
        for k, v in blk.items():
            merged[k] = merged[k] + v if k in merged else v
        out[p] = {k: v for k, v in merged.items() if v}
    return {p: blk for p, blk in out.items() if blk}


def gaussian_sdr(c: FreeComplex) -> tuple[FreeComplex, SDR]:
    """Eliminate constant differential entries until none remain; returns
    the reduced complex and the accumulated retract data."""
    current = c
    down = _identity_family(c)
    up = _identity_family(c)
    h: dict[int, dict] = {}
    while True:
        site = _find_unit(current)
        if site is None:
            break
        p, r, cc, phi = site
        reduced, d1, u1, h1 = _eliminate_once(current, p, r, cc, phi)
        corr = _mat_chain(up, _mat_chain(h1, down), shift_b=1)
        h = _fam_add(h, corr)
        down = _mat_chain(d1, down)
        up = _mat_chain(up, u1)
        current = reduced
    return current, SDR(c, current, down, up, h)


def gaussian_eliminate(c: FreeComplex) -> FreeComplex:
    return gaussian_sdr(c)[0]


def twisted_retract(t: TwistedComplex, retracts: Sequence[SDR]) -> TwistedComplex:
    """Replace each constituent by its retract.

    The new map f'_{ji} sums, over ascending paths through the available
    maps, the alternating compositions Ψ_j f ψ f ⋯ f Ψ'_i with the
    homotopies of the intermediate constituents in between.
    """
    if len(retracts) != len(t.constituents):
        raise InputError("one retract per constituent required")
    for sdr, c in zip(retracts, t.constituents):
        if sdr.src.modules != c.modules:
            raise InputError("retract source mismatch")
    n = len(t.constituents)
    new_parts = tuple(s.tgt for s in retracts)
    edges = set(t.maps)
    new_maps: dict[tuple, ChainMapData] = {}
    for j in range(n):
        for i in range(j):
            total: dict[int, dict] = {}
            for path in _paths(i, j, edges):
                fam = retracts[i].up
                shift = 0
                for step in range(len(path) - 1):
                    a, b = path[step], path[step + 1]
                    fam = _mat_chain(t.maps[(b, a)].blocks, fam, shift_b=shift)
                    shift -= 1
                    if step < len(path) - 2:
                        fam = _mat_chain(retracts[b].h, fam, shift_b=shift)
                        shift += 1
                fam = _mat_chain(retracts[j].down, fam, shift_b=shift)
                total = _fam_add(total, fam)
            if total:
                new_maps[(j, i)] = ChainMapData(total)
    return TwistedComplex(new_parts, new_maps)


def _paths(i: int, j: int, edges: set) -> list[list[int]]:
    """Ascending index paths i → j along the available twisted maps."""
    out: list[list[int]] = []

    def walk(prefix):
        last = prefix[-1]
        if last == j:
            out.append(list(prefix))
            return
        for k in range(last + 1, j + 1):
            if (k, last) in edges:
                prefix.append(k)
                walk(prefix)
                prefix.pop()

    walk([i])
    return out


# -- graded homology by quantum-degree slices --------------------------------


@functools.lru_cache(maxsize=None)
def _monomials(nvars: int, total: int) -> tuple[tuple, ...]:
    if total < 0:
        return ()
    if nvars == 0:
        return ((),) if total == 0 else ()
    out = []
    for first in range(total + 1):
        for rest in _monomials(nvars - 1, total - first):
            out.append((first,) + rest)
    return tuple(out)


def _echelon_insert(rows: list, pivots: dict, v: dict, coords: dict):
    """Reduce v against the echelon rows, accumulating sparse tag
    coordinates; installs the residual as a new row, or returns
    (None, coords) when v lies in the span."""
    while v:
        piv = min(v)
        if piv not in pivots:
            rows.append((v, coords))
            pivots[piv] = len(rows) - 1
            return v, coords
        row, rc = rows[pivots[piv]]
        factor = v[piv] / row[piv]
        for k, c in row.items():
            val = v.get(k, _ZERO) - factor * c
            if val:
                v[k] = val
            elif k in v:
                del v[k]
        for k, c in rc.items():
            val = coords.get(k, _ZERO) - factor * c
            if val:
                coords[k] = val
            else:
                coords.pop(k, None)
    return None, coords


def _kernel(cols: list, ncols: int) -> list:
    """Kernel basis of the matrix with the given sparse columns."""
    rows: list = []
    pivots: dict = {}
    kernel = []
    for ci in range(ncols):
        res, coords = _echelon_insert(rows, pivots, dict(cols[ci]), {ci: _ONE})
        if res is None:
            kernel.append({i: c for i, c in coords.items() if c})
    return kernel


class _Slice:
    """Monomial basis of one (q, a, position) slice with homology data."""

    def __init__(self, basis: list, reps: list, rows: list, pivots: dict):
        self.basis = basis
        self.index = {b: i for i, b in enumerate(basis)}
        self.reps = reps
        self._rows = rows
        self._pivots = pivots

    @property
    def dim(self) -> int:
        return len(self.reps)

    def project(self, vec: Mapping[int, object]) -> list:
        """Coordinates of a cycle over the stored representatives."""
        v = {k: _Q(c) for k, c in vec.items() if c}
        coords = [_ZERO] * len(self.reps)
        while v:
            piv = min(v)
            if piv not in self._pivots:
                raise InputError("vector is not a cycle modulo the image")
            row, rc = self._rows[self._pivots[piv]]
            factor = v[piv] / row[piv]
            for k, c in row.items():
                val = v.get(k, _ZERO) - factor * c
                if val:
                    v[k] = val
                elif k in v:
                    del v[k]
            for i, c in rc.items():
                coords[i] = coords[i] + factor * c
        return coords


@dataclass
class HomologyTable:
    """Graded homology dimensions keyed (q, a, position)."""

    dims: dict
    q_range: tuple[int, int]
    slices: Optional[dict] = None

    def dim(self, q: int, a: int, position: int) -> int:
        return self.dims.get((q, a, position), 0)

    def nonzero(self) -> dict:
        return {k: v for k, v in self.dims.items() if v}

    def total(self) -> int:
        return sum(self.dims.values())

    def same_dims(self, other: HomologyTable) -> bool:
        return self.nonzero() == other.nonzero()

    def shifted(self, q: int = 0, a: int = 0) -> HomologyTable:
        dims = {(qq + q, aa + a, p): d for (qq, aa, p), d in self.dims.items()}
        lo, hi = self.q_range
        return HomologyTable(dims, (lo + q, hi + q))

    def q_series(self) -> dict:
        """Collapse to (q, a) → total dimension across positions."""
        out: dict[tuple, int] = {}
        for (q, a, _p), d in self.dims.items():
            if d:
                out[(q, a)] = out.get((q, a), 0) + d
        return out


def graded_homology(
    c, q_lo: int, q_hi: int, reps: bool = False, jobs: int = 1
) -> HomologyTable:
    """Slice homology of a complex between two quantum degrees.

    Parameters
    ----------
    c:
        A FreeComplex, or a KoszulComplex (expanded automatically).
    q_lo, q_hi:
        Inclusive window of quantum degrees.
    reps:
        Keep slice bases and representative cycles for later transport.
    jobs:
        Worker count; slices are independent, so they may be evaluated
        concurrently.

    Returns a HomologyTable with exact dimensions per (q, a, position).
    """
    if isinstance(c, KoszulComplex):
        c = to_free(c)
    step = c.a_step
    if step is None:
        raise InputError("homology needs a uniform Hochschild step")
    nv = len(c.ring.variables)
    dims: dict = {}
    slices: dict = {}

    def slice_basis(p: int, q: int, a: int) -> list:
        out = []
        for gi, (gq, ga) in enumerate(c.module(p)):
            if ga != a:
                continue
            rem = q - gq
            if rem < 0 or rem % 2:
                continue
            for m in _monomials(nv, rem // 2):
                out.append((gi, m))
        return out

    def diff_columns(p: int, src_basis: list, tgt_index: dict) -> list:
        by_src: dict[int, list] = {}
        for (r, cc), poly in c.diff(p).items():
            by_src.setdefault(cc, []).append((r, poly))
        cols = []
        for gi, m in src_basis:
            col: dict[int, object] = {}
            for r, poly in by_src.get(gi, ()):
                for e, coeff in poly.terms.items():
                    key = (r, tuple(x + y for x, y in zip(e, m)))
                    ti = tgt_index.get(key)
                    if ti is None:
                        raise InputError("slice bases misaligned")
                    col[ti] = col.get(ti, _ZERO) + coeff
            cols.append({k: v for k, v in col.items() if v})
        return cols

    def handle(p: int, q: int, a: int):
        basis = slice_basis(p, q, a)
        if not basis:
            if reps:
                slices[(q, a, p)] = _Slice([], [], [], {})
            return
        below = slice_basis(p - 1, q, a - step)
        below_index = {b: i for i, b in enumerate(below)}
        out_cols = diff_columns(p, basis, below_index)
        kernel = _kernel(out_cols, len(basis))
        above = slice_basis(p + 1, q, a + step)
        basis_index = {b: i for i, b in enumerate(basis)}
        in_cols = diff_columns(p + 1, above, basis_index)
        rows: list = []
        pivots: dict = {}
        images = []
        for col in in_cols:
            if col:
                res, _ = _echelon_insert(rows, pivots, dict(col), {})
                if res is not None:
                    images.append(col)
        nreps = []
        for vec in kernel:
            res, _ = _echelon_insert(rows, pivots, dict(vec), {})
            if res is not None:
                nreps.append(vec)
        if nreps:
            dims[(q, a, p)] = len(nreps)
        if reps:
            rows3: list = []
            piv3: dict = {}
            for col in images:
                _echelon_insert(rows3, piv3, dict(col), {})
            for i, vec in enumerate(nreps):
                _echelon_insert(rows3, piv3, dict(vec), {i: _ONE})
            slices[(q, a, p)] = _Slice(basis, nreps, rows3, piv3)

    a_values = sorted({ga for gens in c.modules for _gq, ga in gens})
    work = [
        (p, q, a)
        for q in range(q_lo, q_hi + 1)
        for p in c.positions
        for a in a_values
    ]
    if jobs > 1:
        import concurrent.futures

        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(lambda w: handle(*w), work))
    else:
        for w in work:
            handle(*w)
    return HomologyTable(dims, (q_lo, q_hi), slices if reps else None)
