"""Cayley graphs over finite abelian groups: distance partitions, the
exact distance-regularity test, spectra, imprimitivity and reductions.

Everything arithmetic is exact: convolutions are integer vectors,
eigenvalues are cyclotomic integers, and numerics are used only to fix
the descending eigenvalue order (behind a separation gate).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np

from .cyclotomic import CyclotomicInteger
from .errors import InvariantViolation, NotConnectedError, PrecisionError, SpecError
from .groups import (
    AbelianGroup,
    GroupElement,
    Subgroup,
    all_subgroups,
    atoms,
    format_element,
    generated_subgroup,
    quotient_group,
    subgroup_as_group,
    subgroup_from_elements,
)

MAX_CLIQUE_ORDER = 200
EIGENVALUE_GATE = 1e-9


class CayleyGraph:
    """Cay(G, S): vertices G, edges g ~ h iff h - g in S."""

    def __init__(self, group: AbelianGroup, connection: Iterable[GroupElement]):
        conn = frozenset(connection)
        for s in conn:
            group._check_member(s)
        if any(s.is_zero for s in conn):
            raise SpecError("connection set contains the identity")
        if any(-s not in conn for s in conn):
            raise SpecError("connection set is not inverse closed")
        self.group = group
        self.connection = conn
        self._cache: Dict[str, object] = {}

    # -- basics ----------------------------------------------------------
    @property
    def order(self) -> int:
        return self.group.order

    @property
    def degree(self) -> int:
        return len(self.connection)

    def indicator(self) -> np.ndarray:
        vec = self._cache.get("indicator")
        if vec is None:
            vec = np.zeros(self.group.order, dtype=np.int64)
            for s in self.connection:
                vec[self.group.index(s)] = 1
            self._cache["indicator"] = vec
        return vec  # type: ignore[return-value]

    def connection_indices(self) -> np.ndarray:
        return np.flatnonzero(self.indicator())

    def adjacency(self) -> np.ndarray:
        """Dense 0/1 matrix under the group's element order."""
        mat = self._cache.get("adjacency")
        if mat is None:
            mat = self.indicator()[self.group.sub_table().T].astype(np.int8)
            self._cache["adjacency"] = mat
        return mat  # type: ignore[return-value]

    def is_connected(self) -> bool:
        return generated_subgroup(self.group, self.connection).order == self.group.order

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CayleyGraph)
            and self.group == other.group
            and self.connection == other.connection
        )

    def __hash__(self) -> int:
        return hash((self.group.moduli, tuple(sorted(s.coords for s in self.connection))))

    def __repr__(self) -> str:
        return f"Cay({self.group}, {{{';'.join(format_element(s) for s in sorted(self.connection))}}})"


def build(group: AbelianGroup, connection: Iterable[GroupElement]) -> CayleyGraph:
    return CayleyGraph(group, connection)


# ---------------------------------------------------------------------------
# distance partition


@dataclass(frozen=True)
class DistancePartition:
    group: AbelianGroup
    classes: Tuple[Tuple[int, ...], ...]  # index tuples, classes[i] = S_i

    @property
    def diameter(self) -> int:
        return len(self.classes) - 1

    def class_elements(self, i: int) -> Tuple[GroupElement, ...]:
        els = self.group.elements()
        return tuple(els[j] for j in self.classes[i])

    def distance_vector(self) -> np.ndarray:
        dist = np.full(self.group.order, -1, dtype=np.int64)
        for i, cls in enumerate(self.classes):
            dist[list(cls)] = i
        return dist


def distance_partition(graph: CayleyGraph) -> DistancePartition:
    """BFS layers from the identity inside the difference structure."""
    g = graph.group
    n = g.order
    add = g.add_table()
    sconn = graph.connection_indices()
    seen = np.zeros(n, dtype=bool)
    zero = g.index(g.zero)
    seen[zero] = True
    classes: List[Tuple[int, ...]] = [(zero,)]
    frontier = np.array([zero])
    while True:
        nxt = np.unique(add[np.ix_(frontier, sconn)])
        nxt = nxt[~seen[nxt]]
        if nxt.size == 0:
            break
        seen[nxt] = True
        classes.append(tuple(int(x) for x in nxt))
        frontier = nxt
    if not seen.all():
        raise NotConnectedError("connection set does not generate the group")
    return DistancePartition(g, tuple(classes))


# ---------------------------------------------------------------------------
# intersection arrays and the distance-regularity test


@dataclass(frozen=True)
class IntersectionArray:
    b: Tuple[int, ...]  # b_0 .. b_{d-1}
    c: Tuple[int, ...]  # c_1 .. c_d

    def __post_init__(self):
        if len(self.b) != len(self.c):
            raise SpecError("intersection array halves have different lengths")
        if not self.b:
            return
        if self.c[0] != 1:
            raise SpecError("c_1 must be 1")
        if any(x < 0 for x in self.b + self.c):
            raise SpecError("intersection numbers must be non-negative")

    @property
    def d(self) -> int:
        return len(self.b)

    @property
    def k(self) -> int:
        return self.b[0] if self.b else 0

    def b_at(self, i: int) -> int:
        return self.b[i] if 0 <= i < self.d else 0

    def c_at(self, i: int) -> int:
        return self.c[i - 1] if 1 <= i <= self.d else (0 if i == 0 else 0)

    def a_at(self, i: int) -> int:
        return self.k - self.b_at(i) - self.c_at(i)

    @property
    def a(self) -> Tuple[int, ...]:
        return tuple(self.a_at(i) for i in range(1, self.d + 1))

    def class_sizes(self) -> Tuple[int, ...]:
        """k_0, k_1, ..., k_d from k_{i+1} = k_i b_i / c_{i+1}; exact."""
        ks = [1]
        for i in range(self.d):
            num = ks[-1] * self.b[i]
            den = self.c[i]
            if num % den != 0:
                raise InvariantViolation("class sizes are not integral")
            ks.append(num // den)
        return tuple(ks)

    @property
    def is_bipartite(self) -> bool:
        return all(self.a_at(i) == 0 for i in range(1, self.d + 1))

    @property
    def is_antipodal(self) -> bool:
        if self.d < 2:
            return False
        half = self.d // 2
        return all(self.b_at(i) == self.c_at(self.d - i) for i in range(self.d) if i != half)

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.b)) + ";" + ",".join(map(str, self.c)) + "}"

    def to_dict(self) -> dict:
        return {"b": list(self.b), "c": list(self.c), "a": list(self.a), "k": list(self.class_sizes())}


@dataclass(frozen=True)
class DRGCheck:
    ok: bool
    array: Optional[IntersectionArray]
    partition: Optional[DistancePartition]
    witness: Optional[dict] = None


def check_distance_regular(graph: CayleyGraph) -> DRGCheck:
    """Exact test: for each layer i the convolution of the layer indicator
    with the connection indicator must be constant on the classes at
    distance i-1, i, i+1 and zero elsewhere."""
    part = distance_partition(graph)
    n = graph.group.order
    d = part.diameter
    sub = graph.group.sub_table()
    s_vec = graph.indicator()
    inds = []
    for cls in part.classes:
        v = np.zeros(n, dtype=np.int64)
        v[list(cls)] = 1
        inds.append(v)
    b = [0] * d
    c = [0] * d
    for i in range(d + 1):
        prod = s_vec[sub] @ inds[i]  # (layer_i * S)[t] = |neighbors of t in S_i|
        for j in range(d + 1):
            vals = prod[list(part.classes[j])]
            lo, hi = int(vals.min()), int(vals.max())
            if lo != hi:
                return DRGCheck(False, None, part, {"layer": i, "class": j, "min": lo, "max": hi})
            if abs(i - j) > 1 and hi != 0:
                return DRGCheck(False, None, part, {"layer": i, "class": j, "nonzero": hi})
            if j == i + 1 and j <= d:
                c[j - 1] = hi  # c_{i+1}
            if j == i - 1:
                b[j] = hi  # b_{i-1}
    arr = IntersectionArray(tuple(b), tuple(c))
    sizes = arr.class_sizes()
    if sizes != tuple(len(cls) for cls in part.classes) or sum(sizes) != n:
        raise InvariantViolation("intersection array inconsistent with layer sizes")
    for i in range(d):
        if sizes[i] * arr.b[i] != sizes[i + 1] * arr.c[i]:
            raise InvariantViolation("k_i b_i != k_{i+1} c_{i+1}")
    return DRGCheck(True, arr, part)


def check_distance_regular_bruteforce(graph: CayleyGraph) -> DRGCheck:
    """Per-vertex-pair oracle: BFS from every vertex on the adjacency
    matrix, then verify c/a/b constancy over all pairs at each distance.
    Independent of the identity-based shortcut."""
    n = graph.order
    A = graph.adjacency().astype(bool)
    dist = np.full((n, n), -1, dtype=np.int64)
    for u in range(n):
        dist[u, u] = 0
        frontier = np.zeros(n, dtype=bool)
        frontier[u] = True
        seen = frontier.copy()
        level = 0
        while frontier.any():
            level += 1
            nxt = A[frontier].any(axis=0) & ~seen
            dist[u, nxt] = level
            seen |= nxt
            frontier = nxt
    if (dist < 0).any():
        return DRGCheck(False, None, None, {"disconnected": True})
    d = int(dist.max())
    if d == 0:
        return DRGCheck(True, IntersectionArray((), ()), None)
    Ai = A.astype(np.int64)
    b = [0] * d
    c = [0] * d
    a_vals = [0] * d
    for i in range(1, d + 1):
        pairs = dist == i
        if not pairs.any():
            raise InvariantViolation("distance value skipped")
        prev = (dist == i - 1).astype(np.int64) @ Ai  # [u,v] = |N(v) at dist i-1 from u|
        same = (dist == i).astype(np.int64) @ Ai
        nxt = (dist == i + 1).astype(np.int64) @ Ai
        for name, mat in (("c", prev), ("a", same), ("b", nxt)):
            vals = mat[pairs]
            if vals.min() != vals.max():
                return DRGCheck(False, None, None, {"distance": i, "parameter": name})
            if name == "c":
                c[i - 1] = int(vals[0])
            elif name == "b":
                if i <= d - 1:
                    b[i] = int(vals[0])
                elif int(vals[0]) != 0:
                    raise InvariantViolation("b_d must vanish")
            else:
                a_vals[i - 1] = int(vals[0])
    b[0] = int(A.sum(axis=1)[0])
    deg = A.sum(axis=1)
    if deg.min() != deg.max():
        return DRGCheck(False, None, None, {"irregular": True})
    arr = IntersectionArray(tuple(b), tuple(c))
    for i in range(1, d + 1):
        if arr.a_at(i) != a_vals[i - 1]:
            return DRGCheck(False, None, None, {"distance": i, "parameter": "a-mismatch"})
    return DRGCheck(True, arr, None)


# ---------------------------------------------------------------------------
# spectrum


@dataclass(frozen=True)
class Eigensystem:
    group: AbelianGroup
    values: Tuple[CyclotomicInteger, ...]  # descending
    numerics: Tuple[float, ...]
    multiplicities: Tuple[int, ...]
    level_sets: Tuple[Tuple[int, ...], ...]  # character indices per eigenvalue

    @property
    def count(self) -> int:
        return len(self.values)

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [
                {"value_exact": repr(v), "value_numeric": x, "multiplicity": m}
                for v, x, m in zip(self.values, self.numerics, self.multiplicities)
            ]
        }


def spectrum(graph: CayleyGraph, dps: int = 40) -> Eigensystem:
    """Exact eigenvalues chi_g(S) grouped by cyclotomic equality; the
    descending order is fixed numerically behind a separation gate."""
    import mpmath

    g = graph.group
    m = g.exponent
    sel = graph.connection_indices()
    buckets: Dict[Tuple[int, ...], List[int]] = {}
    reps: Dict[Tuple[int, ...], CyclotomicInteger] = {}
    for gi, ge in enumerate(g.elements()):
        counts = np.bincount(g.pairing_row(ge)[sel], minlength=m) if sel.size else np.zeros(m, dtype=np.int64)
        val = CyclotomicInteger.from_root_counts(m, counts)
        key = val.coeffs
        buckets.setdefault(key, []).append(gi)
        reps.setdefault(key, val)
    entries = []
    with mpmath.workdps(dps):
        for key, chars in buckets.items():
            val = reps[key]
            if val != val.conjugate():
                raise InvariantViolation("eigenvalue of an inverse-closed set must be real")
            z = val.numeric(dps)
            if abs(z.imag) > mpmath.mpf(10) ** (-dps // 2):
                raise InvariantViolation("real eigenvalue evaluated with a large imaginary part")
            entries.append((float(z.real), mpmath.mpf(z.real), val, tuple(sorted(chars))))
        entries.sort(key=lambda e: e[1], reverse=True)
        for (_, x1, v1, _), (_, x2, v2, _) in zip(entries, entries[1:]):
            if abs(x1 - x2) < EIGENVALUE_GATE:
                raise PrecisionError(
                    f"eigenvalues {v1!r} and {v2!r} separated by less than {EIGENVALUE_GATE}"
                )
    values = tuple(e[2] for e in entries)
    numerics = tuple(e[0] for e in entries)
    mults = tuple(len(e[3]) for e in entries)
    levels = tuple(e[3] for e in entries)
    _eigensystem_invariants(graph, values, mults)
    if graph.is_connected():
        if mults[0] != 1 or values[0] != graph.degree:
            raise InvariantViolation("top eigenvalue of a connected graph must be the degree, simple")
    neg = g.neg_table()
    for lev in levels:
        if {int(neg[i]) for i in lev} != set(lev):
            raise InvariantViolation("eigenvalue level sets must be inverse closed")
    return Eigensystem(g, values, numerics, mults, levels)


def _eigensystem_invariants(graph, values, mults) -> None:
    n = graph.group.order
    if sum(mults) != n:
        raise InvariantViolation("eigenvalue multiplicities must sum to the order")
    tr = sum((m * v for m, v in zip(mults, values)), CyclotomicInteger.from_int(0))
    if tr != 0:
        raise InvariantViolation("eigenvalues must sum to zero (trace)")
    tr2 = sum((m * (v * v) for m, v in zip(mults, values)), CyclotomicInteger.from_int(0))
    if tr2 != graph.degree * n:
        raise InvariantViolation("sum of squared eigenvalues must equal k|G|")


def is_integral(graph: CayleyGraph, dps: int = 40) -> bool:
    return all(v.is_rational_integer for v in spectrum(graph, dps).values)


def boolean_algebra_membership(group: AbelianGroup, connection: FrozenSet[GroupElement]) -> bool:
    """True iff S is an exact union of atoms [g] = {x : <x> = <g>}."""
    for part in atoms(group):
        inter = sum(1 for e in part if e in connection)
        if inter not in (0, len(part)):
            return False
    return True


def integrality_agreement(graph: CayleyGraph, dps: int = 40) -> bool:
    """Spectrum integrality must coincide with atom-union membership."""
    spec_side = is_integral(graph, dps)
    atom_side = boolean_algebra_membership(graph.group, graph.connection)
    if spec_side != atom_side:
        raise InvariantViolation("integral spectrum and atom-union membership disagree")
    return spec_side


# ---------------------------------------------------------------------------
# imprimitivity and reductions


@dataclass(frozen=True)
class Imprimitivity:
    bipartite: bool
    antipodal: bool
    antipodal_class: Optional[Subgroup]  # H = S_0 u S_d when antipodal


def imprimitivity(graph: CayleyGraph, check: Optional[DRGCheck] = None) -> Imprimitivity:
    if check is None:
        check = check_distance_regular(graph)
    if not check.ok or check.array is None or check.partition is None:
        raise SpecError("imprimitivity analysis requires a distance-regular graph")
    arr, part = check.array, check.partition
    bip = arr.is_bipartite
    anti = arr.is_antipodal
    h_sub = None
    if anti:
        els = graph.group.elements()
        members = [els[i] for i in part.classes[0] + part.classes[-1]]
        try:
            h_sub = subgroup_from_elements(graph.group, members)
        except SpecError as exc:
            raise InvariantViolation("antipodal class S_0 u S_d is not a subgroup") from exc
    return Imprimitivity(bip, anti, h_sub)


def antipodal_quotient(graph: CayleyGraph, check: Optional[DRGCheck] = None) -> CayleyGraph:
    """Folded graph Cay(G/H, S/H) for antipodal Gamma; re-verified DRG."""
    if check is None:
        check = check_distance_regular(graph)
    info = imprimitivity(graph, check)
    if not info.antipodal or info.antipodal_class is None:
        raise SpecError("graph is not antipodal")
    if check.partition.diameter < 2:
        raise SpecError("antipodal quotient needs diameter at least 2")
    q, proj = quotient_group(graph.group, info.antipodal_class)
    conn = {proj(s) for s in graph.connection}
    if any(x.is_zero for x in conn):
        raise InvariantViolation("connection set meets the antipodal class")
    folded = CayleyGraph(q, conn)
    if not check_distance_regular(folded).ok:
        raise InvariantViolation("antipodal quotient failed the distance-regularity recheck")
    return folded


def bipartition_subgroup(graph: CayleyGraph, check: Optional[DRGCheck] = None) -> Subgroup:
    if check is None:
        check = check_distance_regular(graph)
    info = imprimitivity(graph, check)
    if not info.bipartite:
        raise SpecError("graph is not bipartite")
    els = graph.group.elements()
    evens = [els[i] for cls in check.partition.classes[::2] for i in cls]
    try:
        h = subgroup_from_elements(graph.group, evens)
    except SpecError as exc:
        raise InvariantViolation("even-distance classes do not form a subgroup") from exc
    if h.order * 2 != graph.order:
        raise InvariantViolation("bipartition subgroup must have index 2")
    return h


def halved_graph(graph: CayleyGraph, check: Optional[DRGCheck] = None) -> CayleyGraph:
    """Cay(H, S_2) on the bipartition subgroup, re-verified DRG."""
    if check is None:
        check = check_distance_regular(graph)
    h = bipartition_subgroup(graph, check)
    k_group, iso = subgroup_as_group(h)
    els = graph.group.elements()
    s2 = [els[i] for i in check.partition.classes[2]] if check.partition.diameter >= 2 else []
    if not s2:
        raise SpecError("graph has no distance-2 class to halve")
    conn = {iso[x] for x in s2}
    halved = CayleyGraph(k_group, conn)
    res = check_distance_regular(halved)
    if not res.ok:
        raise InvariantViolation("halved graph failed the distance-regularity recheck")
    if res.array.is_bipartite and halved.degree > 0 and halved.order > 2:
        raise InvariantViolation("halved graph of a bipartite graph must be non-bipartite")
    return halved


def quotient_by_subgroup(
    graph: CayleyGraph, sub: Subgroup, check: Optional[DRGCheck] = None
) -> Tuple[CayleyGraph, IntersectionArray]:
    """Quotient of an antipodal non-bipartite diameter-3 graph by a
    subgroup of its antipodal class, with the predicted array
    {k, mu|K|(r/|K| - 1), 1; 1, mu|K|, k} (complete when K = H)."""
    if check is None:
        check = check_distance_regular(graph)
    if not check.ok or check.partition.diameter != 3:
        raise SpecError("quotient-by-subgroup requires a distance-regular graph of diameter 3")
    info = imprimitivity(graph, check)
    if not info.antipodal or info.bipartite:
        raise SpecError("quotient-by-subgroup requires an antipodal non-bipartite graph")
    H = info.antipodal_class
    if not set(sub.elements) <= set(H.elements):
        raise SpecError("subgroup is not contained in the antipodal class")
    arr = check.array
    k = arr.k
    mu = arr.c_at(2)
    r = H.order
    kk = sub.order
    if kk == r:
        predicted = IntersectionArray((k,), (1,))
    else:
        rr = r // kk
        predicted = IntersectionArray((k, mu * kk * (rr - 1), 1), (1, mu * kk, k))
    q, proj = quotient_group(graph.group, sub)
    conn = {proj(s) for s in graph.connection}
    if any(x.is_zero for x in conn):
        raise InvariantViolation("connection set meets the collapsing subgroup")
    quotient = CayleyGraph(q, conn)
    res = check_distance_regular(quotient)
    if not res.ok or res.array != predicted:
        raise InvariantViolation(
            f"quotient array {res.array if res.ok else 'none'} differs from predicted {predicted}"
        )
    return quotient, predicted


# ---------------------------------------------------------------------------
# cliques and bounds


def clique_number(graph: CayleyGraph) -> int:
    """Exact maximum clique via branch and bound with greedy coloring."""
    n = graph.order
    if n > MAX_CLIQUE_ORDER:
        raise SpecError(f"exact clique search limited to order {MAX_CLIQUE_ORDER}")
    A = graph.adjacency()
    adj = [0] * n
    for u in range(n):
        mask = 0
        for v in np.flatnonzero(A[u]):
            mask |= 1 << int(v)
        adj[u] = mask
    best = 0

    def color_bound(cand: int) -> List[Tuple[int, int]]:
        # greedy coloring, returns (vertex, color-count-so-far) in order
        order = []
        color_masks: List[int] = []
        rest = cand
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            for ci, cm in enumerate(color_masks):
                if not (cm & adj[v]):
                    color_masks[ci] |= 1 << v
                    order.append((v, ci + 1))
                    break
            else:
                color_masks.append(1 << v)
                order.append((v, len(color_masks)))
        return order

    def expand(size: int, cand: int) -> None:
        nonlocal best
        order = color_bound(cand)
        for v, colors in reversed(order):
            if size + colors <= best:
                return
            nxt = cand & adj[v]
            if size + 1 > best:
                best = size + 1
            if nxt:
                expand(size + 1, nxt)
            cand &= ~(1 << v)

    expand(0, (1 << n) - 1)
    return best


def delsarte_bound(graph: CayleyGraph, dps: int = 40) -> int:
    """floor(1 - k/theta_min); exact when the least eigenvalue is integral."""
    import mpmath

    eig = spectrum(graph, dps)
    theta_min = eig.values[-1]
    if eig.count == 1:
        raise SpecError("Delsarte bound needs a negative eigenvalue")
    if theta_min.is_rational_integer:
        t = theta_min.as_int()
        if t >= 0:
            raise SpecError("least eigenvalue must be negative")
        return int(Fraction(1) - Fraction(graph.degree, t))
    with mpmath.workdps(dps):
        t = theta_min.numeric(dps).real
        if t >= 0:
            raise SpecError("least eigenvalue must be negative")
        val = 1 - mpmath.mpf(graph.degree) / t
        if abs(val - mpmath.nint(val)) < mpmath.mpf(10) ** (-dps // 2):
            raise PrecisionError("Delsarte bound too close to an integer to floor safely")
        return int(mpmath.floor(val))


# ---------------------------------------------------------------------------
# family detection


@dataclass(frozen=True)
class FamilyLabel:
    kind: str
    params: Tuple[Tuple[str, int], ...] = ()

    def __str__(self) -> str:
        if not self.params:
            return self.kind
        inner = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.kind}({inner})"

    def to_dict(self) -> dict:
        return {"family": self.kind, "parameters": dict(self.params)}


def detect_family(graph: CayleyGraph, check: Optional[DRGCheck] = None) -> FamilyLabel:
    """Label a distance-regular Cayley graph by structural family."""
    if check is None:
        check = check_distance_regular(graph)
    if not check.ok:
        raise SpecError("family detection requires a distance-regular graph")
    g = graph.group
    n = g.order
    conn = graph.connection
    if len(conn) == n - 1:
        return FamilyLabel("complete", (("n", n),))
    complement = frozenset(e for e in g.elements() if e not in conn)
    try:
        h = subgroup_from_elements(g, complement)
        if 1 < h.order < n:
            return FamilyLabel("multipartite", (("t", n // h.order), ("m", h.order)))
    except SpecError:
        pass
    arr, part = check.array, check.partition
    if arr.is_bipartite and arr.is_antipodal and arr.d == 3 and len(part.classes[3]) == 1:
        return FamilyLabel("crown", (("m", n // 2),))
    if graph.degree == 2 and n >= 3:
        return FamilyLabel("cycle", (("n", n),))
    if len(g.moduli) == 2 and g.moduli[0] == g.moduli[1] and _is_odd_prime(g.moduli[0]):
        p = g.moduli[0]
        closed = conn | {g.zero}
        full = [h for h in all_subgroups(g) if h.order == p and set(h.elements) <= closed]
        covered = {e for h in full for e in h.elements}
        if covered == closed and 2 <= len(full) <= p - 1:
            return FamilyLabel("union-of-order-p-subgroups", (("p", p), ("r", len(full))))
    if _is_odd_prime(n) and n % 4 == 1:
        residues = frozenset(g.element([pow(x, 2, n)]) for x in range(1, n))
        nonres = frozenset(e for e in g.elements() if not e.is_zero and e not in residues)
        if conn == residues or conn == nonres:
            return FamilyLabel("paley", (("n", n),))
    return FamilyLabel("none")


def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# exports


def export_graph6(graph: CayleyGraph) -> str:
    """Standard graph6 string of the adjacency matrix in element order."""
    A = graph.adjacency()
    n = graph.order
    return encode_graph6(A, n)


def encode_graph6(A: np.ndarray, n: int) -> str:
    bits: List[int] = []
    for j in range(1, n):
        for i in range(j):
            bits.append(int(A[i, j]))
    while len(bits) % 6:
        bits.append(0)
    chunks = [sum(b << (5 - i) for i, b in enumerate(bits[k : k + 6])) for k in range(0, len(bits), 6)]
    return _graph6_size(n) + "".join(chr(63 + c) for c in chunks)


def _graph6_size(n: int) -> str:
    if n <= 62:
        return chr(63 + n)
    if n <= 258047:
        return "~" + "".join(chr(63 + ((n >> s) & 63)) for s in (12, 6, 0))
    raise SpecError("graph too large for graph6")


def decode_graph6(text: str) -> np.ndarray:
    """Independent decoder used to certify the encoder by roundtrip."""
    if text.startswith("~~"):
        raise SpecError("graph6 sizes above 258047 unsupported")
    if text.startswith("~"):
        n = 0
        for ch in text[1:4]:
            n = (n << 6) | (ord(ch) - 63)
        body = text[4:]
    else:
        n = ord(text[0]) - 63
        body = text[1:]
    need = n * (n - 1) // 2
    bits: List[int] = []
    for ch in body:
        v = ord(ch) - 63
        if not 0 <= v < 64:
            raise SpecError("invalid graph6 character")
        bits.extend((v >> (5 - i)) & 1 for i in range(6))
    if len(bits) < need:
        raise SpecError("graph6 body too short")
    A = np.zeros((n, n), dtype=np.int8)
    pos = 0
    for j in range(1, n):
        for i in range(j):
            A[i, j] = A[j, i] = bits[pos]
            pos += 1
    return A


def export_adjacency(graph: CayleyGraph) -> dict:
    return {
        "group": str(graph.group),
        "connection": [format_element(s) for s in sorted(graph.connection)],
        "order": graph.order,
        "adjacency": graph.adjacency().tolist(),
    }


def graph_report(graph: CayleyGraph, dps: int = 40) -> dict:
    """The JSON-ready report: array, spectrum, flags, family."""
    check = check_distance_regular(graph)
    rep: dict = {
        "group": str(graph.group),
        "connection": [format_element(s) for s in sorted(graph.connection)],
        "distance_regular": check.ok,
    }
    if not check.ok:
        rep["witness"] = check.witness
        return rep
    info = imprimitivity(graph, check)
    eig = spectrum(graph, dps)
    rep.update(
        {
            "intersection_array": check.array.to_dict(),
            "array": str(check.array),
            "diameter": check.partition.diameter,
            "spectrum": eig.to_dict()["eigenvalues"],
            "flags": {
                "bipartite": info.bipartite,
                "antipodal": info.antipodal,
                "integral": all(v.is_rational_integer for v in eig.values),
            },
        }
    )
    rep.update(detect_family(graph, check).to_dict())
    return rep
