"""Triply graded link homology from crossing resolution cubes.

Each classical crossing of a closed diagram is resolved in two ways; the
resolutions are tied together by a pair of degree-0 column maps.  The
resulting cube of Koszul complexes carries two commuting differentials:
the internal Koszul one and the column one.  Homology is taken for the
internal differential first (per quantum/Hochschild slice, with
representatives), then for the induced column maps, giving dimensions
graded by (q, a, t).
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Mapping, Optional

from .algebra import RatFunc, TriSeries, ratfunc_reconstruct, series_expand
from .diagram import CROSSING_KINDS, Diagram, InputError
from .koszul import (
    ChainMap,
    FreeComplex,
    GradedRing,
    KoszulComplex,
    KoszulRow,
    MarkSDR,
    Poly,
    graded_homology,
    mark_removal_sdr,
    to_free,
    virtual_rows,
)
from .moy import StuckError, homfly_state_sum, pb_eval

__all__ = [
    "ChiMaps",
    "CrossingComplex",
    "Corner",
    "DiagramBicomplex",
    "HomologyResult",
    "DecatEntry",
    "DecatReport",
    "ShiftComparison",
    "chi_maps",
    "crossing_complex",
    "build_bicomplex",
    "compute_homology",
    "diagram_homology",
    "clear_homology_cache",
    "decat_check",
    "compare_up_to_shift",
]


# -- the two column maps ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ChiMaps:
    """The crossing maps in their explicit three-stage presentations.

    ``smoothing`` and ``vertex`` are the rank-(1,2,1) free resolutions of
    the two local bimodules; ``chi_in`` maps the smoothing into the
    q^{-2}-shifted vertex complex and ``chi_out`` maps the vertex complex
    back.  Both are genuine chain maps of quantum degree zero (checked on
    construction) and both compositions act as multiplication by y1 - x2.
    """

    ring: GradedRing
    smoothing: FreeComplex
    vertex: FreeComplex
    chi_in: ChainMap
    chi_out: ChainMap


@functools.lru_cache(maxsize=None)
def chi_maps() -> ChiMaps:
    """Build the local column maps over Q[x1, x2, y1, y2]."""
    ring = GradedRing(("x1", "x2", "y1", "y2"))
    x1, x2, y1, y2 = (ring.var(n) for n in ring.variables)
    lin = x1 + x2 - y1 - y2
    quad = (y1 - x1) * (y1 - x2)
    mark = y1 - x2
    one = ring.const(1)
    smoothing = FreeComplex(
        ring,
        0,
        (((0, 0),), ((2, 1), (2, 1)), ((4, 2),)),
        (
            {(0, 0): x2 - y2, (0, 1): y1 - x1},
            {(0, 0): y1 - x1, (1, 0): y2 - x2},
        ),
    )
    vertex = FreeComplex(
        ring,
        0,
        (((0, 0),), ((2, 1), (4, 1)), ((6, 2),)),
        (
            {(0, 0): lin, (0, 1): quad},
            {(0, 0): quad, (1, 0): -lin},
        ),
    )
    chi_in = ChainMap(
        smoothing,
        vertex.shifted(q=-2),
        0,
        {
            0: {(0, 0): mark},
            1: {(0, 0): mark, (1, 0): one, (1, 1): one},
            2: {(0, 0): one},
        },
    )
    chi_out = ChainMap(
        vertex,
        smoothing,
        0,
        {
            0: {(0, 0): one},
            1: {(0, 0): one, (1, 0): -one, (1, 1): mark},
            2: {(0, 0): mark},
        },
    )
    return ChiMaps(ring, smoothing, vertex, chi_in, chi_out)


def _chi_local(kind: str, mark: Poly, one: Poly) -> dict:
    """Column map on the exterior (row subset) basis of one crossing.

    Rows of the smoothing factor are (y1 - x1, y2 - x2); rows of the
    vertex factor are (y1 + y2 - x1 - x2, (y1 - x1)(y1 - x2)).  Entries
    map a local subset to a tuple of (target subset, coefficient) pairs;
    the map preserves subset size, so no global reordering signs arise.
    """
    if kind == "pos":
        return {
            (): (((), mark),),
            (0,): (((1,), one),),
            (1,): (((0,), mark), ((1,), -one)),
            (0, 1): (((0, 1), -one),),
        }
    return {
        (): (((), one),),
        (0,): (((0,), one), ((1,), one)),
        (1,): (((0,), mark),),
        (0, 1): (((0, 1), -mark),),
    }


_SUBSET_ORDER = {(): 0, (0,): 0, (1,): 1, (0, 1): 0}


def _blocks_from_table(table: Mapping) -> dict:
    blocks: dict[int, dict] = {}
    for s, images in table.items():
        for t, coeff in images:
            blocks.setdefault(len(s), {})[(_SUBSET_ORDER[t], _SUBSET_ORDER[s])] = coeff
    return blocks


@dataclass(frozen=True, eq=False)
class CrossingComplex:
    """Local column data of a single node.

    INPUT conventions: the node's variable roles are x1, x2 (inputs) and
    y1, y2 (outputs).
    OUTPUT: ``columns`` in increasing t-order with their t-degrees, and
    ``chi`` the column map between the expanded columns (None for the
    single-column virtual case).
    """

    kind: str
    ring: GradedRing
    columns: tuple[KoszulComplex, ...]
    t_degrees: tuple[int, ...]
    chi: Optional[ChainMap]


@functools.lru_cache(maxsize=None)
def crossing_complex(kind: str) -> CrossingComplex:
    ring = GradedRing(("x1", "x2", "y1", "y2"))
    x1, x2, y1, y2 = (ring.var(n) for n in ring.variables)
    smoothing = KoszulComplex(
        ring, (KoszulRow(y1 - x1, 2, 1), KoszulRow(y2 - x2, 2, 1))
    )
    wide = KoszulComplex(
        ring,
        (KoszulRow(y1 + y2 - x1 - x2, 2, 1), KoszulRow((y1 - x1) * (y1 - x2), 4, 1)),
    )
    table = _chi_local(kind, y1 - x2, ring.const(1))
    if kind == "pos":
        columns = (smoothing, wide.with_shift(q=-2, t=1))
        t_degrees = (0, 1)
    elif kind == "neg":
        columns = (wide.with_shift(t=-1), smoothing)
        t_degrees = (-1, 0)
    elif kind == "vir":
        col = KoszulComplex(ring, virtual_rows(ring, "x1", "x2", "y1", "y2"))
        return CrossingComplex("vir", ring, (col,), (0,), None)
    else:
        raise InputError(f"unknown crossing kind: {kind}")
    chi = ChainMap(
        to_free(columns[0]), to_free(columns[1]), 0, _blocks_from_table(table)
    )
    return CrossingComplex(kind, ring, columns, t_degrees, chi)


# -- the diagram bicomplex ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class Corner:
    """One resolution corner: its glued complex, reduced with transport."""

    active: tuple[int, ...]
    t_degree: int
    full: KoszulComplex
    complex: KoszulComplex
    sdrs: tuple[MarkSDR, ...]


@dataclass(frozen=True, eq=False)
class DiagramBicomplex:
    """All resolution corners of a diagram, tied into t-columns.

    Every node occupies two adjacent row slots of each corner complex and
    every free loop one zero row; corners are keyed by their tuple of
    active crossing bits.  A crossing's bit is active when its column sits
    at the higher t-degree (vertex for positive, smoothing for negative).
    """

    diagram: Diagram
    ring: GradedRing
    crossings: tuple[str, ...]
    slots: Mapping[str, int]
    loop_slots: tuple[int, ...]
    corners: Mapping[tuple[int, ...], Corner]
    chi_tables: Mapping[str, Mapping]
    shift: tuple[int, int, int] = (0, 0, 0)

    @property
    def t_range(self) -> tuple[int, int]:
        counts = self.diagram.counts
        return (-counts.get("neg", 0), counts.get("pos", 0))

    def t_columns(self) -> dict[int, tuple[tuple[int, ...], ...]]:
        cols: dict[int, list] = {}
        for key, corner in self.corners.items():
            cols.setdefault(corner.t_degree, []).append(key)
        return {t: tuple(keys) for t, keys in sorted(cols.items())}

    def column_ranks(self) -> dict[int, int]:
        """Number of hypercube corners per t-column."""
        return {t: len(keys) for t, keys in self.t_columns().items()}

    def flip_target(self, active: tuple[int, ...], index: int) -> tuple[int, ...]:
        if active[index]:
            raise InputError("flip needs an inactive crossing bit")
        return active[:index] + (1,) + active[index + 1 :]

    @staticmethod
    def flip_sign(active: tuple[int, ...], index: int) -> int:
        return -1 if sum(active[:index]) % 2 else 1

    def apply_flip(self, index: int, vec: Mapping[tuple, Poly]) -> dict:
        """Column map of one crossing on full-corner subset vectors.

        The hypercube sign is not included; combine with ``flip_sign``.
        """
        k = self.slots[self.crossings[index]]
        table = self.chi_tables[self.crossings[index]]
        out: dict[tuple, Poly] = {}
        for s, poly in vec.items():
            local = tuple(i - k for i in s if k <= i <= k + 1)
            rest = tuple(i for i in s if i < k or i > k + 1)
            for t, cpoly in table[local]:
                key = tuple(sorted(rest + tuple(k + j for j in t)))
                val = poly * cpoly
                if not val:
                    continue
                out[key] = out[key] + val if key in out else val
        return {k2: v for k2, v in out.items() if v}


def _greedy_reduce(c: KoszulComplex) -> tuple[KoszulComplex, tuple[MarkSDR, ...]]:
    sdrs = []
    progress = True
    while progress:
        progress = False
        for z in sorted(c.ring.internal):
            try:
                c, sdr = mark_removal_sdr(c, z)
            except InputError:
                continue
            sdrs.append(sdr)
            progress = True
            break
    return c, tuple(sdrs)


def build_bicomplex(d: Diagram) -> DiagramBicomplex:
    """Assemble the resolution cube of a diagram.

    Parameters
    ----------
    d:
        An oriented diagram.  Open tangles are accepted (their boundary
        edges stay external ring variables), but only closed diagrams can
        feed `compute_homology`.

    Returns
    -------
    DiagramBicomplex
        All 2^(#classical crossings) corners with their reduced Koszul
        complexes and removal transport chains.
    """
    boundary = set(d.boundary_in) | set(d.boundary_out)
    ring = GradedRing(d.edges, frozenset(d.edges) - boundary)
    crossings = tuple(nd.id for nd in d.nodes if nd.kind in CROSSING_KINDS)
    slots = {nd.id: 2 * i for i, nd in enumerate(d.nodes)}
    loop_slots = tuple(2 * len(d.nodes) + i for i in range(len(d.loops)))
    chi_tables = {}
    for nd in d.nodes:
        if nd.kind in CROSSING_KINDS:
            mark = ring.var(nd.out1) - ring.var(nd.in2)
            chi_tables[nd.id] = _chi_local(nd.kind, mark, ring.const(1))

    corners: dict[tuple[int, ...], Corner] = {}
    for bits in itertools.product((0, 1), repeat=len(crossings)):
        rows: list[KoszulRow] = []
        ci = 0
        pos_active = 0
        for nd in d.nodes:
            x1, x2 = ring.var(nd.in1), ring.var(nd.in2)
            y1, y2 = ring.var(nd.out1), ring.var(nd.out2)
            if nd.kind in CROSSING_KINDS:
                use_vertex = bits[ci] == (1 if nd.kind == "pos" else 0)
                if nd.kind == "pos" and bits[ci]:
                    pos_active += 1
                ci += 1
            else:
                use_vertex = nd.kind == "moy"
            if nd.kind == "vir":
                rows.extend(virtual_rows(ring, nd.in1, nd.in2, nd.out1, nd.out2))
            elif use_vertex:
                rows.append(KoszulRow(y1 + y2 - x1 - x2, 2, 1))
                rows.append(KoszulRow((y1 - x1) * (y1 - x2), 4, 1))
            else:
                rows.append(KoszulRow(y1 - x1, 2, 1))
                rows.append(KoszulRow(y2 - x2, 2, 1))
        for _ in d.loops:
            rows.append(KoszulRow(ring.zero(), 2, 1))
        tdeg = sum(bits) - d.counts.get("neg", 0)
        full = KoszulComplex(ring, tuple(rows)).with_shift(q=-2 * pos_active, t=tdeg)
        reduced, sdrs = _greedy_reduce(full)
        corners[bits] = Corner(bits, tdeg, full, reduced, sdrs)
    return DiagramBicomplex(
        d, ring, crossings, slots, loop_slots, corners, chi_tables
    )


# -- homology of the bicomplex ------------------------------------------------


@functools.lru_cache(maxsize=None)
def _combos(n: int, p: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.combinations(range(n), p))


def _exp_tuples(n: int, total: int):
    """Exponent tuples of length n summing to total, in a fixed order."""
    if n == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _exp_tuples(n - 1, total - first):
            yield (first,) + rest


def _mul_terms(a: dict, b: dict) -> dict:
    out: dict[tuple, object] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            s = out.get(e, 0) + c1 * c2
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def _subst_power(powers: dict, key: int, terms: dict, k: int) -> dict:
    if k == 1:
        return terms
    got = powers.get((key, k))
    if got is None:
        got = _mul_terms(_subst_power(powers, key, terms, k - 1), terms)
        powers[(key, k)] = got
    return got


def _eval_terms(terms: Mapping, images: tuple, width: int, powers: dict) -> dict:
    """Apply a variable substitution to a raw exponent-dict polynomial.

    ``images[i]`` is ("v", j) when source variable i survives as target
    variable j, or ("p", terms) for a composite replacement; ``powers``
    caches repeated replacement powers.
    """
    out: dict[tuple, object] = {}
    for e, c in terms.items():
        base = [0] * width
        factors = []
        for i, k in enumerate(e):
            if not k:
                continue
            kind, val = images[i]
            if kind == "v":
                base[val] += k
            else:
                factors.append(_subst_power(powers, i, val, k))
        acc = {tuple(base): c}
        for f in factors:
            acc = _mul_terms(acc, f)
        for ee, cc in acc.items():
            s = out.get(ee, 0) + cc
            if s:
                out[ee] = s
            else:
                out.pop(ee, None)
    return out


@dataclass(eq=False)
class _CornerData:
    """Slice homology of one corner, with free variables factored out.

    Variables absent from every row contribute a free polynomial factor;
    dropping them shrinks the monomial bases, and classes of the full
    corner are pairs (free monomial, compressed representative).  The
    remaining fields hold the corner's composite projection: the original
    rows consumed by mark removals, the index remap of surviving rows,
    and the triangular substitution sending every original variable to
    its image in the reduced ring.
    """

    corner: Corner
    small: KoszulComplex
    used_idx: tuple[int, ...]
    free_idx: tuple[int, ...]
    table: HomologyTable
    dropped: frozenset
    reindex: dict
    images: tuple
    powers: dict

    @classmethod
    def build(cls, corner, small, used_idx, free_idx, table):
        alive = list(range(len(corner.full.rows)))
        dropped = set()
        for sdr in corner.sdrs:
            dropped.add(alive[sdr.site])
            del alive[sdr.site]
        reindex = {orig: i for i, orig in enumerate(alive)}
        full_vars = corner.full.ring.variables
        full_index = {v: i for i, v in enumerate(full_vars)}
        final_vars = corner.complex.ring.variables
        final_index = {v: i for i, v in enumerate(final_vars)}
        images: list = [None] * len(full_vars)
        for v in final_vars:
            images[full_index[v]] = ("v", final_index[v])
        powers: dict = {}
        width = len(final_vars)
        for sdr in reversed(corner.sdrs):
            sub = tuple(
                images[full_index[v]] for v in sdr.reduced.ring.variables
            )
            terms = _eval_terms(sdr.repl.terms, sub, width, powers)
            images[full_index[sdr.z]] = ("p", terms)
        return cls(
            corner,
            small,
            used_idx,
            free_idx,
            table,
            frozenset(dropped),
            reindex,
            tuple(images),
            {},
        )

    def down(self, vec: Mapping[tuple, Poly]) -> dict:
        """Composite projection onto the reduced corner, as raw terms."""
        width = len(self.corner.complex.ring.variables)
        out: dict[tuple, dict] = {}
        for s, poly in vec.items():
            if self.dropped & set(s):
                continue
            key = tuple(self.reindex[i] for i in s)
            terms = _eval_terms(poly.terms, self.images, width, self.powers)
            if not terms:
                continue
            tgt = out.setdefault(key, {})
            for e, c in terms.items():
                acc = tgt.get(e, 0) + c
                if acc:
                    tgt[e] = acc
                else:
                    tgt.pop(e, None)
        return {k: v for k, v in out.items() if v}


def _compress(c: KoszulComplex) -> tuple[KoszulComplex, tuple, tuple]:
    names = c.ring.variables
    used = set()
    for row in c.rows:
        for e in row.poly.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(i)
    used_idx = tuple(sorted(used))
    free_idx = tuple(i for i in range(len(names)) if i not in used)
    if not free_idx:
        return c, used_idx, free_idx
    kept = tuple(names[i] for i in used_idx)
    ring = GradedRing(kept, frozenset(kept) & c.ring.internal)
    rows = tuple(
        KoszulRow(
            Poly(
                ring,
                {
                    tuple(e[i] for i in used_idx): co
                    for e, co in row.poly.terms.items()
                },
            ),
            row.q_shift,
            row.a_shift,
        )
        for row in c.rows
    )
    return KoszulComplex(ring, rows, c.shift), used_idx, free_idx


def _corner_classes(cd: _CornerData, q: int, a: int) -> list:
    """Classes of the corner at (q, a) as (free degree, monomial, rep)."""
    out = []
    nfree = len(cd.free_idx)
    if nfree == 0:
        return [(0, (), ri) for ri in range(cd.table.dim(q, a, a))]
    q_floor = cd.table.q_range[0]
    k = 0
    while q - 2 * k >= q_floor:
        n = cd.table.dim(q - 2 * k, a, a)
        if n:
            for mu in _exp_tuples(nfree, k):
                out.extend((k, mu, ri) for ri in range(n))
        k += 1
    return out


def _decode(cd: _CornerData, q: int, a: int, k: int, mu: tuple, ri: int) -> dict:
    """Recover a subset-keyed vector over the reduced corner ring."""
    slc = cd.table.slices[(q - 2 * k, a, a)]
    ring = cd.corner.complex.ring
    combos = _combos(len(cd.corner.complex.rows), a)
    width = len(ring.variables)
    terms: dict[tuple, dict] = {}
    for bi, coeff in slc.reps[ri].items():
        gi, mono = slc.basis[bi]
        e = [0] * width
        for j, idx in enumerate(cd.used_idx):
            e[idx] = mono[j]
        for j, idx in enumerate(cd.free_idx):
            e[idx] = mu[j]
        terms.setdefault(combos[gi], {})[tuple(e)] = coeff
    return {s: Poly(ring, t) for s, t in terms.items()}


def _project_into(
    cd: _CornerData,
    q: int,
    a: int,
    vec: Mapping[tuple, Poly],
    index_map: Optional[Mapping],
    base: Optional[int],
    sign: int,
    col: dict,
) -> None:
    """Split a transported cycle by free part, project each piece."""
    combos = _combos(len(cd.corner.complex.rows), a)
    index = {s: gi for gi, s in enumerate(combos)}
    pieces: dict[tuple, dict] = {}
    for s, poly in vec.items():
        gi = index[s]
        for e, coeff in poly.terms.items():
            mu = tuple(e[i] for i in cd.free_idx)
            se = tuple(e[i] for i in cd.used_idx)
            pieces.setdefault(mu, {})[(gi, se)] = coeff
    for mu, coords_terms in pieces.items():
        k = sum(mu)
        slc = cd.table.slices.get((q - 2 * k, a, a)) if cd.table.slices else None
        if slc is None:
            if any(coords_terms.values()):
                raise InputError("transported class escapes its graded slice")
            continue
        coords: dict[int, object] = {}
        for key, coeff in coords_terms.items():
            bi = slc.index.get(key)
            if bi is None:
                raise InputError("transported class escapes its graded slice")
            coords[bi] = coords.get(bi, 0) + coeff
        proj = slc.project(coords)
        for ri, cval in enumerate(proj):
            if cval:
                idx = base + index_map[(mu, ri)]
                col[idx] = col.get(idx, 0) + sign * cval


def _rank(cols: list) -> int:
    rows: list = []
    pivots: dict = {}
    rank = 0
    for col in cols:
        v = dict(col)
        while v:
            piv = min(v)
            hit = pivots.get(piv)
            if hit is None:
                pivots[piv] = len(rows)
                rows.append(v)
                rank += 1
                break
            row = rows[hit]
            f = v[piv] / row[piv]
            for k, c in row.items():
                val = v.get(k, 0) - f * c
                if val:
                    v[k] = val
                elif k in v:
                    del v[k]
    return rank


def _transport_column(b, data, q: int, a: int, key, cls, offsets, index_maps) -> dict:
    """Image of one homology class under all single-bit column maps."""
    cd = data[key]
    vec = _decode(cd, q, a, *cls)
    for sdr in reversed(cd.corner.sdrs):
        vec = sdr.up(vec)
    col: dict[int, object] = {}
    active = cd.corner.active
    for ci in range(len(b.crossings)):
        if active[ci]:
            continue
        tgt_key = b.flip_target(active, ci)
        w = b.apply_flip(ci, vec)
        for sdr in data[tgt_key].corner.sdrs:
            w = sdr.down(w)
        _project_into(
            data[tgt_key],
            q,
            a,
            w,
            index_maps.get(tgt_key),
            offsets.get(tgt_key, 0),
            b.flip_sign(active, ci),
            col,
        )
    return {k: v for k, v in col.items() if v}


def _slice_dims(b, data, q: int, a: int, out: dict) -> None:
    classes: dict[int, list] = {}
    offsets: dict = {}
    index_maps: dict = {}
    for key, cd in data.items():
        cls = _corner_classes(cd, q, a)
        if cls:
            lst = classes.setdefault(cd.corner.t_degree, [])
            offsets[key] = len(lst)
            index_maps[key] = {
                (mu, ri): i for i, (_k, mu, ri) in enumerate(cls)
            }
            lst.extend((key, c) for c in cls)
    if not classes:
        return
    mats: dict[int, list] = {}
    for t, cols in classes.items():
        mats[t] = [
            _transport_column(b, data, q, a, key, cls, offsets, index_maps)
            for key, cls in cols
        ]
    for t, cols in mats.items():
        nxt = mats.get(t + 1)
        if nxt is None:
            continue
        for v in cols:
            acc: dict[int, object] = {}
            for i, c in v.items():
                for r, c2 in nxt[i].items():
                    acc[r] = acc.get(r, 0) + c * c2
            if any(acc.values()):
                raise InputError("induced column maps fail to square to zero")
    ranks = {t: _rank(cols) for t, cols in mats.items()}
    for t, lst in classes.items():
        h = len(lst) - ranks.get(t, 0) - ranks.get(t - 1, 0)
        if h < 0:
            raise InputError("homology bookkeeping produced a negative rank")
        if h:
            out[(q, a, t)] = h


@dataclass(frozen=True)
class HomologyResult:
    """Graded dimensions of the triply graded homology of a diagram.

    ``series`` holds dimensions per (q, a, t) through the q-cutoff;
    ``closed_form`` is a rational reconstruction when the series
    stabilizes inside the window, and ``shift`` records any overall
    monomial normalization applied after computation (none by default).
    """

    series: TriSeries
    cutoff: int
    closed_form: Optional[RatFunc] = None
    shift: tuple[int, int, int] = (0, 0, 0)

    def shifted(self, q: int = 0, a: int = 0, t: int = 0) -> HomologyResult:
        series = self.series.shift(q, a, t)
        cf = None if self.closed_form is None else self.closed_form.shift(q, a, t)
        shift = (self.shift[0] + q, self.shift[1] + a, self.shift[2] + t)
        return HomologyResult(series, series.cutoff, cf, shift)

    def to_json(self) -> dict:
        out = {"cutoff": self.cutoff, "dims": self.series.to_json()["dims"]}
        if self.closed_form is not None:
            out["closed_form"] = str(self.closed_form)
        if any(self.shift):
            out["shift"] = list(self.shift)
        return out

    def text_table(self) -> str:
        lines = [f"series through q^{self.cutoff}"]
        if any(self.shift):
            q, a, t = self.shift
            lines.append(f"applied shift: q^{q} a^{a} t^{t}")
        if self.closed_form is not None:
            lines.append(f"closed form: {self.closed_form}")
        dims = {e: c for e, c in self.series.dims.items() if c}
        if not dims:
            lines.append("(zero through the cutoff)")
            return "\n".join(lines)
        for t in sorted({e[2] for e in dims}):
            sub = {(q, a): c for (q, a, tt), c in dims.items() if tt == t}
            qs = sorted({q for q, _ in sub})
            avals = sorted({a for _, a in sub})
            lines.append(f"t^{t}:")
            head = ["a\\q"] + [str(q) for q in qs]
            body = [
                [str(a)] + [str(sub.get((q, a), "."))  for q in qs]
                for a in avals
            ]
            widths = [
                max(len(row[i]) for row in [head] + body)
                for i in range(len(head))
            ]
            for row in [head] + body:
                lines.append("  " + "  ".join(c.rjust(w) for c, w in zip(row, widths)))
        return "\n".join(lines)


def compute_homology(
    b: DiagramBicomplex, q_cutoff: int = 40, jobs: int = 1
) -> HomologyResult:
    """Homology of the column maps acting on slice homology.

    Parameters
    ----------
    b:
        A bicomplex built from a closed diagram.
    q_cutoff:
        Quantum degrees are computed through this bound; dimensions above
        it are not reported.
    jobs:
        Worker count forwarded to the slice homology pass.

    Returns
    -------
    HomologyResult
        Dimensions per (q, a, t), with a closed form when the series
        stabilizes inside the cutoff window (series-only otherwise).
    """
    if not b.diagram.is_closed:
        raise InputError("homology needs a closed diagram")
    q_lo = 0
    parts = {}
    for key, corner in b.corners.items():
        small, used_idx, free_idx = _compress(corner.complex)
        fc = to_free(small)
        parts[key] = (small, used_idx, free_idx, fc)
        for p in fc.positions:
            for gq, _ga in fc.module(p):
                q_lo = min(q_lo, gq)
    data = {
        key: _CornerData(
            b.corners[key],
            small,
            used_idx,
            free_idx,
            graded_homology(fc, q_lo, q_cutoff, reps=True, jobs=jobs),
        )
        for key, (small, used_idx, free_idx, fc) in parts.items()
    }
    dims: dict[tuple, int] = {}
    pairs = set()
    for cd in data.values():
        step = 2 if cd.free_idx else None
        for (q, a, _p), n in cd.table.dims.items():
            if not n:
                continue
            if step is None:
                pairs.add((q, a))
            else:
                pairs.update((qq, a) for qq in range(q, q_cutoff + 1, step))
    for q, a in sorted(pairs):
        _slice_dims(b, data, q, a, dims)
    series = TriSeries(dims, q_cutoff)
    closed = ratfunc_reconstruct(series, b.diagram.component_count())
    if closed is not None:
        series = TriSeries(dims, q_cutoff, closed)
    return HomologyResult(series, q_cutoff, closed)


_HOM_CACHE: dict = {}


def diagram_homology(d: Diagram, q_cutoff: int = 40, jobs: int = 1) -> HomologyResult:
    """Cached build-and-compute for a closed diagram."""
    key = (d, q_cutoff)
    if key not in _HOM_CACHE:
        _HOM_CACHE[key] = compute_homology(build_bicomplex(d), q_cutoff, jobs=jobs)
    return _HOM_CACHE[key]


def clear_homology_cache() -> None:
    _HOM_CACHE.clear()


# -- decategorification and comparisons ---------------------------------------


@dataclass(frozen=True)
class DecatEntry:
    oracle: str
    status: str
    detail: str = ""


@dataclass(frozen=True)
class DecatReport:
    """Outcome of comparing homology at t = -1 with polynomial oracles."""

    status: str
    entries: tuple[DecatEntry, ...]
    cutoff: int

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "cutoff": self.cutoff,
            "entries": [
                {"oracle": e.oracle, "status": e.status, "detail": e.detail}
                for e in self.entries
            ],
        }


def _compare_euler(got: TriSeries, expected: TriSeries, oracle: str) -> DecatEntry:
    n = min(got.cutoff, expected.cutoff)
    for e in sorted(set(got.dims) | set(expected.dims)):
        if e[0] > n:
            continue
        g, w = got.dims.get(e, 0), expected.dims.get(e, 0)
        if g != w:
            return DecatEntry(
                oracle,
                "fail",
                f"first discrepancy at q^{e[0]} a^{e[1]}: "
                f"homology gives {g}, polynomial gives {w}",
            )
    return DecatEntry(oracle, "pass", f"matches through q^{n}")


def decat_check(d: Diagram, q_cutoff: int = 40, jobs: int = 1) -> DecatReport:
    """Check that homology collapses to the polynomial invariants.

    Parameters
    ----------
    d:
        A closed diagram.
    q_cutoff:
        Comparison window for the series expansions.

    Returns
    -------
    DecatReport
        One entry per applicable oracle (the deformed evaluation always,
        the state sum when the diagram has no virtual crossings); overall
        status is "fail" if any entry fails, else "pass" if any entry
        passes, else "inconclusive".
    """
    h = diagram_homology(d, q_cutoff, jobs=jobs)
    euler = h.series.subst_t(-1)
    entries = []
    res = pb_eval(d)
    if res.stuck is not None:
        entries.append(
            DecatEntry("pb", "inconclusive", "rewriting stuck before a closed form")
        )
    else:
        entries.append(_compare_euler(euler, series_expand(res.value, q_cutoff), "pb"))
    if not d.counts.get("vir", 0):
        try:
            value = homfly_state_sum(d)
        except StuckError:
            entries.append(
                DecatEntry("homfly", "inconclusive", "state sum stuck on a graph")
            )
        else:
            entries.append(
                _compare_euler(euler, series_expand(value, q_cutoff), "homfly")
            )
    statuses = {e.status for e in entries}
    if "fail" in statuses:
        status = "fail"
    elif "pass" in statuses:
        status = "pass"
    else:
        status = "inconclusive"
    return DecatReport(status, tuple(entries), q_cutoff)


@dataclass(frozen=True)
class ShiftComparison:
    """Result of aligning two homology tables by a unit monomial.

    When ``status`` is "isomorphic_with_shift", the first table equals the
    second shifted by q^i a^j t^k with ``shift`` = (i, j, k).
    """

    status: str
    shift: Optional[tuple[int, int, int]] = None

    def monomial(self) -> Optional[str]:
        if self.shift is None:
            return None
        parts = [
            f"{name}^{e}"
            for name, e in zip(("q", "a", "t"), self.shift)
            if e
        ]
        return "*".join(parts) if parts else "1"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "shift": list(self.shift) if self.shift is not None else None,
            "monomial": self.monomial(),
        }


def compare_up_to_shift(h1: HomologyResult, h2: HomologyResult) -> ShiftComparison:
    """Find the unit monomial aligning two homology tables, if any.

    Dimensions are nonnegative, so a matching shift must align the
    support minima in each grading; that single candidate is verified
    entrywise through the shared reliable window.
    """
    if h1.cutoff != h2.cutoff:
        raise InputError("shift comparison needs matching cutoffs")
    d1 = {e for e, c in h1.series.dims.items() if c}
    d2 = {e for e, c in h2.series.dims.items() if c}
    if not d1 and not d2:
        return ShiftComparison("isomorphic_with_shift", (0, 0, 0))
    if not d1 or not d2:
        return ShiftComparison("distinct")
    shift = tuple(
        min(e[i] for e in d1) - min(e[i] for e in d2) for i in range(3)
    )
    if h1.series.agrees_with(h2.series.shift(*shift)):
        return ShiftComparison("isomorphic_with_shift", shift)
    return ShiftComparison("distinct")
