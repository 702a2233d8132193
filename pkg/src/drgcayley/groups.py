"""Finite abelian groups presented as direct products of cyclic factors.

A group is a list of moduli [n_1, ..., n_r]; elements are coordinate
tuples of residues.  Elements are enumerated lexicographically and hot
paths work with the integer index of an element in that enumeration.
Quotients and subgroups-as-groups are realized through an exact integer
Smith normal form; the projection / isomorphism maps are the contract,
the moduli of the derived group are an implementation artifact.
"""

from __future__ import annotations

import functools as ft
import itertools as it
from dataclasses import dataclass
from math import gcd, prod
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InvariantViolation, SpecError

MAX_ORDER = 2048
MAX_AUT_ORDER = 200
MAX_SUBGROUPS = 50_000


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else max(a, b)


class AbelianGroup:
    """Direct product Z_{n_1} + ... + Z_{n_r}; the empty product is trivial."""

    def __init__(self, moduli: Sequence[int]):
        mods = tuple(int(n) for n in moduli)
        if any(n < 1 for n in mods):
            raise SpecError(f"moduli must be positive, got {mods}")
        order = prod(mods) if mods else 1
        if order > MAX_ORDER:
            raise SpecError(f"group order {order} exceeds the supported bound {MAX_ORDER}")
        self.moduli = mods
        self.rank = len(mods)
        self.order = order
        self.exponent = 1
        for n in mods:
            self.exponent = _lcm(self.exponent, n)
        # index strides, lexicographic (first coordinate most significant)
        strides = []
        acc = 1
        for n in reversed(mods):
            strides.append(acc)
            acc *= n
        self._strides = tuple(reversed(strides))
        self._cache: Dict[str, object] = {}

    # -- value semantics ------------------------------------------------
    def __eq__(self, other) -> bool:
        return isinstance(other, AbelianGroup) and self.moduli == other.moduli

    def __hash__(self) -> int:
        return hash(("AbelianGroup", self.moduli))

    def __repr__(self) -> str:
        return f"AbelianGroup({list(self.moduli)})"

    def __str__(self) -> str:
        return ",".join(str(n) for n in self.moduli) if self.moduli else "1"

    # -- elements --------------------------------------------------------
    def element(self, coords: Sequence[int]) -> "GroupElement":
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.rank:
            raise SpecError(f"expected {self.rank} coordinates, got {len(coords)}")
        coords = tuple(c % n for c, n in zip(coords, self.moduli))
        return GroupElement(self, coords)

    @property
    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def elements(self) -> Tuple["GroupElement", ...]:
        elems = self._cache.get("elements")
        if elems is None:
            elems = tuple(GroupElement(self, c) for c in it.product(*[range(n) for n in self.moduli]))
            self._cache["elements"] = elems
        return elems  # type: ignore[return-value]

    def __iter__(self):
        return iter(self.elements())

    def __len__(self) -> int:
        return self.order

    def index(self, g: "GroupElement") -> int:
        self._check_member(g)
        return sum(c * s for c, s in zip(g.coords, self._strides))

    def from_index(self, i: int) -> "GroupElement":
        if not 0 <= i < self.order:
            raise SpecError(f"element index {i} out of range for order {self.order}")
        return self.elements()[i]

    def _check_member(self, g: "GroupElement") -> None:
        if g.group.moduli != self.moduli:
            raise SpecError(f"element of {g.group} used with {self}")

    # -- arithmetic --------------------------------------------------------
    def add(self, a: "GroupElement", b: "GroupElement") -> "GroupElement":
        self._check_member(a)
        self._check_member(b)
        return GroupElement(self, tuple((x + y) % n for x, y, n in zip(a.coords, b.coords, self.moduli)))

    def neg(self, a: "GroupElement") -> "GroupElement":
        self._check_member(a)
        return GroupElement(self, tuple((-x) % n for x, n in zip(a.coords, self.moduli)))

    def scale(self, k: int, a: "GroupElement") -> "GroupElement":
        self._check_member(a)
        return GroupElement(self, tuple((k * x) % n for x, n in zip(a.coords, self.moduli)))

    def order_of(self, a: "GroupElement") -> int:
        self._check_member(a)
        o = 1
        for x, n in zip(a.coords, self.moduli):
            o = _lcm(o, n // gcd(x, n))
        return o

    # -- character pairing ---------------------------------------------------
    def pairing_exponent(self, g: "GroupElement", x: "GroupElement") -> int:
        """Exponent e with chi_g(x) = zeta_m^e, m the group exponent."""
        self._check_member(g)
        self._check_member(x)
        m = self.exponent
        return sum((m // n) * gc * xc for gc, xc, n in zip(g.coords, x.coords, self.moduli)) % m

    def pairing_row(self, g: "GroupElement") -> np.ndarray:
        """Vector of pairing exponents e(g, x) over all x in index order."""
        m = self.exponent
        weights = np.array([(m // n) * gc for gc, n in zip(g.coords, self.moduli)], dtype=np.int64)
        return (self.coords_matrix() @ weights) % m

    # -- index tables (hot-path plumbing) -----------------------------------
    def coords_matrix(self) -> np.ndarray:
        mat = self._cache.get("coords_matrix")
        if mat is None:
            mat = np.array(
                list(it.product(*[range(n) for n in self.moduli])), dtype=np.int64
            ).reshape(self.order, self.rank)
            self._cache["coords_matrix"] = mat
        return mat  # type: ignore[return-value]

    def add_table(self) -> np.ndarray:
        """add_table[i, j] = index(element_i + element_j)."""
        tab = self._cache.get("add_table")
        if tab is None:
            idx = np.arange(self.order)
            acc = np.zeros((self.order, self.order), dtype=np.int64)
            for n, s in zip(self.moduli, self._strides):
                d = (idx // s) % n
                acc += ((d[:, None] + d[None, :]) % n) * s
            tab = acc.astype(np.int32)
            self._cache["add_table"] = tab
        return tab  # type: ignore[return-value]

    def neg_table(self) -> np.ndarray:
        tab = self._cache.get("neg_table")
        if tab is None:
            idx = np.arange(self.order)
            acc = np.zeros(self.order, dtype=np.int64)
            for n, s in zip(self.moduli, self._strides):
                d = (idx // s) % n
                acc += ((-d) % n) * s
            tab = acc.astype(np.int32)
            self._cache["neg_table"] = tab
        return tab  # type: ignore[return-value]

    def sub_table(self) -> np.ndarray:
        """sub_table[t, g] = index(element_t - element_g)."""
        tab = self._cache.get("sub_table")
        if tab is None:
            tab = self.add_table()[:, self.neg_table()]
            self._cache["sub_table"] = tab
        return tab  # type: ignore[return-value]


@dataclass(frozen=True)
class GroupElement:
    group: AbelianGroup
    coords: Tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.group.rank:
            raise SpecError("coordinate length does not match group rank")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        return self.group.add(self, other)

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self.group.add(self, self.group.neg(other))

    def __neg__(self) -> "GroupElement":
        return self.group.neg(self)

    def __rmul__(self, k: int) -> "GroupElement":
        return self.group.scale(k, self)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupElement)
            and self.group.moduli == other.group.moduli
            and self.coords == other.coords
        )

    def __hash__(self) -> int:
        return hash((self.group.moduli, self.coords))

    def __lt__(self, other: "GroupElement") -> bool:
        return self.coords < other.coords

    def __repr__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def order(self) -> int:
        return self.group.order_of(self)

    @property
    def index(self) -> int:
        return self.group.index(self)


def make_group(moduli: Sequence[int]) -> AbelianGroup:
    """Build Z_{n_1} + ... + Z_{n_r}; the empty sequence gives the trivial group."""
    return AbelianGroup(moduli)


def parse_group(text: str) -> AbelianGroup:
    """Parse the serialized form "n1,n2,..." (e.g. "6,3"); "1" is trivial."""
    text = text.strip()
    if not text:
        raise SpecError("empty group specification")
    try:
        mods = [int(p) for p in text.split(",")]
    except ValueError as exc:
        raise SpecError(f"cannot parse group specification {text!r}") from exc
    if mods == [1]:
        return AbelianGroup([])
    return AbelianGroup(mods)


def parse_element(group: AbelianGroup, text: str) -> GroupElement:
    try:
        coords = [int(p) for p in text.strip().split(",")]
    except ValueError as exc:
        raise SpecError(f"cannot parse element {text!r}") from exc
    return group.element(coords)


def parse_element_set(group: AbelianGroup, text: str) -> FrozenSet[GroupElement]:
    """Parse "1,0;2,0;0,1" into a set of elements."""
    text = text.strip()
    if not text:
        return frozenset()
    return frozenset(parse_element(group, part) for part in text.split(";") if part.strip())


def format_element(g: GroupElement) -> str:
    return ",".join(str(c) for c in g.coords)


def format_element_set(s: Iterable[GroupElement]) -> str:
    return ";".join(format_element(g) for g in sorted(s, key=lambda g: g.coords))


# ---------------------------------------------------------------------------
# subgroups


@dataclass(frozen=True)
class Subgroup:
    """A subgroup given by its (sorted) element tuple inside a parent group."""

    group: AbelianGroup
    elements: Tuple[GroupElement, ...]
    generators: Tuple[GroupElement, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: GroupElement) -> bool:
        return g in self.element_set()

    @ft.lru_cache(maxsize=None)
    def element_set(self) -> FrozenSet[GroupElement]:
        return frozenset(self.elements)

    def indices(self) -> Tuple[int, ...]:
        return tuple(self.group.index(g) for g in self.elements)

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, gens={list(self.generators)})"


def generated_subgroup(group: AbelianGroup, gens: Iterable[GroupElement]) -> Subgroup:
    """Closure of a generating set, elements sorted in index order."""
    gens = tuple(gens)
    for g in gens:
        group._check_member(g)
    seen = {group.zero}
    frontier = [group.zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x + g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    elems = tuple(sorted(seen, key=lambda e: e.coords))
    return Subgroup(group, elems, gens)


def subgroup_from_elements(group: AbelianGroup, elements: Iterable[GroupElement]) -> Subgroup:
    """Wrap a set already known to be closed; verified, violation raises."""
    elems = tuple(sorted(set(elements), key=lambda e: e.coords))
    closure = generated_subgroup(group, elems)
    if len(closure.elements) != len(elems):
        raise SpecError("element set is not closed under the group operation")
    return Subgroup(group, elems, _small_generating_set(group, elems))


def _small_generating_set(group: AbelianGroup, elements: Sequence[GroupElement]) -> Tuple[GroupElement, ...]:
    # greedy: biggest order first, add elements until the closure covers everything
    target = set(elements)
    pool = sorted(target, key=lambda e: (-group.order_of(e), e.coords))
    gens: List[GroupElement] = []
    covered = {group.zero}
    for cand in pool:
        if cand in covered:
            continue
        gens.append(cand)
        covered = set(generated_subgroup(group, gens).elements)
        if covered == target:
            break
    return tuple(gens)


def all_subgroups(group: AbelianGroup) -> Tuple[Subgroup, ...]:
    """Every subgroup, by closing the set of cyclic subgroups under join.

    For abelian groups the join of two subgroups is the set of pairwise
    sums, so a single product pass per join suffices.
    """
    cached = group._cache.get("all_subgroups")
    if cached is not None:
        return cached  # type: ignore[return-value]
    cyclic: Dict[FrozenSet[GroupElement], GroupElement] = {}
    for g in group.elements():
        h = generated_subgroup(group, [g])
        cyclic.setdefault(h.element_set(), g)
    known: Dict[FrozenSet[GroupElement], Tuple[GroupElement, ...]] = {
        frozenset([group.zero]): tuple()
    }
    frontier = list(known)
    while frontier:
        new_frontier = []
        for hset in frontier:
            hgens = known[hset]
            for cset, cgen in cyclic.items():
                if cset <= hset:
                    continue
                joined = frozenset(a + b for a in hset for b in cset)
                if joined not in known:
                    known[joined] = hgens + (cgen,)
                    new_frontier.append(joined)
                    if len(known) > MAX_SUBGROUPS:
                        raise SpecError("subgroup lattice too large to enumerate")
        frontier = new_frontier
    subs = []
    for hset, hgens in known.items():
        elems = tuple(sorted(hset, key=lambda e: e.coords))
        gens = hgens if hgens else (group.zero,)
        subs.append(Subgroup(group, elems, gens))
    subs.sort(key=lambda h: (h.order, tuple(e.coords for e in h.elements)))
    result = tuple(subs)
    group._cache["all_subgroups"] = result
    return result


def subgroups_of_order(group: AbelianGroup, k: int) -> Tuple[Subgroup, ...]:
    if group.order % k != 0:
        raise SpecError(f"no subgroup of order {k} in a group of order {group.order}")
    return tuple(h for h in all_subgroups(group) if h.order == k)


def maximal_subgroups(group: AbelianGroup) -> Tuple[Subgroup, ...]:
    """Subgroups of prime index (the maximal ones in an abelian group)."""
    primes = {p for p in range(2, group.order + 1) if group.order % p == 0 and _is_prime(p)}
    out = []
    for p in primes:
        out.extend(subgroups_of_order(group, group.order // p))
    return tuple(out)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def atoms(group: AbelianGroup) -> Tuple[Tuple[GroupElement, ...], ...]:
    """Atoms of the Boolean algebra of subsets closed under generated-subgroup
    equality: [g] = {x : <x> = <g>}, ordered by smallest member."""
    bucket: Dict[FrozenSet[GroupElement], List[GroupElement]] = {}
    for g in group.elements():
        key = generated_subgroup(group, [g]).element_set()
        bucket.setdefault(key, []).append(g)
    parts = [tuple(sorted(v, key=lambda e: e.coords)) for v in bucket.values()]
    parts.sort(key=lambda part: part[0].coords)
    return tuple(parts)


# ---------------------------------------------------------------------------
# Smith normal form and derived groups


def smith_normal_form(mat: Sequence[Sequence[int]]) -> Tuple[List[List[int]], List[List[int]], List[List[int]]]:
    """Exact SNF over the integers: returns (S, U, V) with S = U @ A @ V,
    U and V unimodular, S diagonal with d_1 | d_2 | ...  Small dense inputs
    only; everything in Python ints."""
    A = [list(map(int, row)) for row in mat]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, f):
        # row_dst += f * row_src
        A[dst] = [a + f * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, f):
        for r in A:
            r[dst] += f * r[src]
        for r in V:
            r[dst] += f * r[src]

    t = 0
    while t < min(rows, cols):
        # smallest-|value| nonzero pivot in the trailing block
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if A[i][j] != 0 and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        if pivot != (t, t):
            if pivot[0] != t:
                swap_rows(t, pivot[0])
            if pivot[1] != t:
                swap_cols(t, pivot[1])
        p = A[t][t]
        # reduce column and row t; any nonzero remainder is smaller than |p|,
        # so looping back to pivot selection terminates
        dirty = False
        for i in range(t + 1, rows):
            q = A[i][t] // p
            if q:
                add_row(t, i, -q)
            if A[i][t] != 0:
                dirty = True
        for j in range(t + 1, cols):
            q = A[t][j] // p
            if q:
                add_col(t, j, -q)
            if A[t][j] != 0:
                dirty = True
        if dirty:
            continue
        # divisibility: fold any non-multiple row into row t and retry
        bad = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if A[i][j] % p != 0:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            add_row(bad, t, 1)
            continue
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return A, U, V


def _snf_check(A, S, U, V) -> None:
    # S == U A V, exact
    rows, cols = len(A), len(A[0]) if A else 0
    UA = [[sum(U[i][k] * A[k][j] for k in range(rows)) for j in range(cols)] for i in range(rows)]
    UAV = [[sum(UA[i][k] * V[k][j] for k in range(cols)) for j in range(cols)] for i in range(rows)]
    if UAV != S:
        raise InvariantViolation("Smith normal form bookkeeping failed")
    for i in range(rows):
        for j in range(cols):
            if i != j and S[i][j] != 0:
                raise InvariantViolation("Smith normal form is not diagonal")


def quotient_group(group: AbelianGroup, sub: Subgroup) -> Tuple[AbelianGroup, Callable[[GroupElement], GroupElement]]:
    """Quotient G/H as an explicit product of cyclic groups plus the
    projection map.  Moduli come from the SNF of the relation lattice."""
    if sub.group != group:
        raise SpecError("subgroup does not belong to the given group")
    r = group.rank
    rel_cols: List[List[int]] = []
    for i, n in enumerate(group.moduli):
        col = [0] * r
        col[i] = n
        rel_cols.append(col)
    for g in sub.generators:
        rel_cols.append(list(g.coords))
    if r == 0:
        q = AbelianGroup([])
        return q, lambda g: q.zero
    A = [[rel_cols[j][i] for j in range(len(rel_cols))] for i in range(r)]
    S, U, V = smith_normal_form(A)
    _snf_check(A, S, U, V)
    diag = [S[i][i] for i in range(min(len(S), len(S[0])))]
    kept = [(i, d) for i, d in enumerate(diag) if d != 1]
    if any(d == 0 for _, d in kept):
        raise InvariantViolation("quotient relation lattice is not full rank")
    qmods = [d for _, d in kept]
    quotient = AbelianGroup(qmods)

    def project(g: GroupElement, _U=U, _kept=kept, _q=quotient, _g=group) -> GroupElement:
        _g._check_member(g)
        return _q.element([sum(_U[i][k] * g.coords[k] for k in range(_g.rank)) % d for i, d in _kept])

    if quotient.order * sub.order != group.order:
        raise InvariantViolation(
            f"quotient order {quotient.order} * subgroup order {sub.order} != {group.order}"
        )
    # projection must be a homomorphism with kernel exactly H
    kernel = [g for g in group.elements() if project(g).is_zero]
    if set(kernel) != sub.element_set():
        raise InvariantViolation("projection kernel differs from the subgroup")
    return quotient, project


def subgroup_as_group(sub: Subgroup) -> Tuple[AbelianGroup, Dict[GroupElement, GroupElement]]:
    """Realize a subgroup as a standalone product of cyclic groups.

    Returns (K, iso) with iso a bijection from subgroup elements onto K.
    """
    group = sub.group
    gens = [g for g in sub.generators if not g.is_zero]
    if not gens:
        triv = AbelianGroup([])
        return triv, {group.zero: triv.zero}
    s = len(gens)
    # coefficient words: element -> a in Z^s with sum a_j gens_j = element
    words: Dict[GroupElement, Tuple[int, ...]] = {group.zero: (0,) * s}
    frontier = [group.zero]
    while frontier:
        nxt = []
        for x in frontier:
            w = words[x]
            for j, g in enumerate(gens):
                y = x + g
                if y not in words:
                    words[y] = tuple(c + (1 if k == j else 0) for k, c in enumerate(w))
                    nxt.append(y)
        frontier = nxt
    if set(words) != sub.element_set():
        raise InvariantViolation("generator closure does not match subgroup elements")
    # kernel of Z^s -> G: columns of V past the rank of [M | diag(n)]
    r = group.rank
    B = [[0] * (s + r) for _ in range(r)]
    for j, g in enumerate(gens):
        for i in range(r):
            B[i][j] = g.coords[i]
    for i, n in enumerate(group.moduli):
        B[i][s + i] = n
    S, U, V = smith_normal_form(B)
    _snf_check(B, S, U, V)
    rank = sum(1 for i in range(min(r, s + r)) if S[i][i] != 0)
    kernel_basis = []  # columns of V with index >= rank, first s coordinates
    for j in range(rank, s + r):
        kernel_basis.append([V[i][j] for i in range(s)])
    if not kernel_basis:
        raise InvariantViolation("finite subgroup must have a full-rank relation lattice")
    K = [[kernel_basis[j][i] for j in range(len(kernel_basis))] for i in range(s)]
    S2, U2, V2 = smith_normal_form(K)
    _snf_check(K, S2, U2, V2)
    diag = [S2[i][i] if i < len(S2[0]) else 0 for i in range(s)]
    if any(d == 0 for d in diag):
        raise InvariantViolation("subgroup relation lattice is not full rank")
    kept = [(i, d) for i, d in enumerate(diag) if d != 1]
    target = AbelianGroup([d for _, d in kept])
    iso: Dict[GroupElement, GroupElement] = {}
    for elem, w in words.items():
        coords = [sum(U2[i][k] * w[k] for k in range(s)) % d for i, d in kept]
        iso[elem] = target.element(coords)
    if len(set(iso.values())) != sub.order or target.order != sub.order:
        raise InvariantViolation("subgroup decomposition is not a bijection")
    # homomorphism spot-check on all pairs at desk scale
    elems = sub.elements
    if len(elems) <= 64:
        pairs = [(a, b) for a in elems for b in elems]
    else:
        pairs = [(a, b) for a in elems[:12] for b in elems[:12]]
    for a, b in pairs:
        if iso[a + b] != iso[a] + iso[b]:
            raise InvariantViolation("subgroup decomposition is not a homomorphism")
    return target, iso


# ---------------------------------------------------------------------------
# automorphisms


def automorphisms(group: AbelianGroup) -> List[np.ndarray]:
    """All automorphisms as permutation arrays over element indices.

    Brute force over generator images; guarded by MAX_AUT_ORDER.
    """
    cached = group._cache.get("automorphisms")
    if cached is not None:
        return cached  # type: ignore[return-value]
    if group.order > MAX_AUT_ORDER:
        raise SpecError(f"automorphism enumeration limited to order {MAX_AUT_ORDER}")
    n = group.order
    elems = group.elements()
    # candidate images of the standard generator e_i: elements killed by n_i
    candidates: List[List[GroupElement]] = []
    for ni in group.moduli:
        cand = [g for g in elems if all((ni * c) % m == 0 for c, m in zip(g.coords, group.moduli))]
        candidates.append(cand)
    coords = group.coords_matrix()
    perms: List[np.ndarray] = []
    for images in it.product(*candidates):
        img_mat = np.array([[im.coords[j] for j in range(group.rank)] for im in images], dtype=np.int64)
        # x = sum x_i e_i  ->  sum x_i images_i ; compute indices directly
        mapped = coords @ img_mat  # (n, rank), still unreduced
        acc = np.zeros(n, dtype=np.int64)
        for j, (m, s) in enumerate(zip(group.moduli, group._strides)):
            acc += (mapped[:, j] % m) * s
        if len(np.unique(acc)) == n:
            perms.append(acc.astype(np.int32))
    perms.sort(key=lambda p: p.tolist())
    group._cache["automorphisms"] = perms
    return perms


def canonicalize_connection_set(group: AbelianGroup, indices: Iterable[int]) -> Tuple[int, ...]:
    """Lexicographically least Aut(G)-image of an index set."""
    idx = sorted(indices)
    best: Optional[Tuple[int, ...]] = None
    for p in automorphisms(group):
        img = tuple(sorted(int(p[i]) for i in idx))
        if best is None or img < best:
            best = img
    assert best is not None
    return best
