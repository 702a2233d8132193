"""Schur rings over abelian groups, duality and Krein parameters.

A Schur ring is presented by a partition of the group whose indicator
sums span a subring of the integer group algebra.  The dual ring lives
on character-value equivalence classes; its structure constants are the
Krein parameters of the original ring, kept in exact integers
throughout.  A Fraction-arithmetic eigenmatrix route cross-checks the
Krein tensor for integral schemes.
"""

from __future__ import annotations

import itertools as it
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .cyclotomic import CyclotomicInteger
from .errors import InvariantViolation, SpecError
from .graphs import CayleyGraph, DRGCheck, check_distance_regular
from .groups import AbelianGroup, GroupElement, generated_subgroup

Tensor = Tuple[Tuple[Tuple[int, ...], ...], ...]


@dataclass(frozen=True)
class SchurRing:
    group: AbelianGroup
    classes: Tuple[Tuple[int, ...], ...]  # index tuples, classes[0] = {0}
    tensor: Tensor  # tensor[i][j][k] = p_{ij}^k

    @property
    def rank(self) -> int:
        return len(self.classes)

    @property
    def d(self) -> int:
        return self.rank - 1

    def class_sizes(self) -> Tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    def class_elements(self, i: int) -> Tuple[GroupElement, ...]:
        els = self.group.elements()
        return tuple(els[j] for j in self.classes[i])

    @property
    def is_symmetric(self) -> bool:
        neg = self.group.neg_table()
        return all(set(int(neg[i]) for i in cls) == set(cls) for cls in self.classes)

    @property
    def is_primitive(self) -> bool:
        els = self.group.elements()
        for cls in self.classes[1:]:
            gen = generated_subgroup(self.group, [els[i] for i in cls])
            if gen.order != self.group.order:
                return False
        return True

    def partition_key(self) -> frozenset:
        return frozenset(frozenset(c) for c in self.classes)

    def to_dict(self) -> dict:
        return {
            "group": str(self.group),
            "classes": [list(c) for c in self.classes],
            "p": [[[int(x) for x in row] for row in plane] for plane in self.tensor],
        }


@dataclass(frozen=True)
class SchurCheck:
    ok: bool
    ring: Optional[SchurRing]
    witness: Optional[dict] = None


def _class_indicators(group: AbelianGroup, classes: Sequence[Sequence[int]]) -> np.ndarray:
    mat = np.zeros((len(classes), group.order), dtype=np.int64)
    for i, cls in enumerate(classes):
        mat[i, list(cls)] = 1
    return mat


def verify_schur_ring(group: AbelianGroup, partition: Sequence[Sequence[int]]) -> SchurCheck:
    """Check the three Schur-ring axioms by exact convolution and return
    the ring with its full structure tensor, or the first violation."""
    classes = [tuple(sorted(int(x) for x in cls)) for cls in partition]
    flat = sorted(x for cls in classes for x in cls)
    if flat != list(range(group.order)):
        return SchurCheck(False, None, {"reason": "not a partition of the group"})
    zero = group.index(group.zero)
    zi = next(i for i, cls in enumerate(classes) if zero in cls)
    if classes[zi] != (zero,):
        return SchurCheck(False, None, {"reason": "the identity class is not {0}"})
    classes.insert(0, classes.pop(zi))
    neg = group.neg_table()
    class_sets = [set(cls) for cls in classes]
    for i, cls in enumerate(classes):
        image = {int(neg[x]) for x in cls}
        if image not in class_sets:
            return SchurCheck(False, None, {"reason": "inverse image of a class is not a class", "class": i})
    ind = _class_indicators(group, classes)
    sub = group.sub_table()
    r = len(classes)
    tensor: List[List[List[int]]] = [[[0] * r for _ in range(r)] for _ in range(r)]
    for i in range(r):
        conv_rows = ind[:, sub] @ ind[i]  # conv_rows[j] = N_i * N_j as a vector
        for j in range(r):
            prod = conv_rows[j]
            for k in range(r):
                vals = prod[list(classes[k])]
                lo, hi = int(vals.min()), int(vals.max())
                if lo != hi:
                    return SchurCheck(
                        False, None, {"i": i, "j": j, "k": k, "min": lo, "max": hi}
                    )
                tensor[i][j][k] = hi
    frozen = tuple(tuple(tuple(row) for row in plane) for plane in tensor)
    return SchurCheck(True, SchurRing(group, tuple(classes), frozen))


def distance_module(graph: CayleyGraph, check: Optional[DRGCheck] = None) -> SchurRing:
    """Schur ring on the distance partition; exists iff the graph is
    distance-regular."""
    if check is None:
        check = check_distance_regular(graph)
    if not check.ok:
        raise SpecError(f"graph is not distance-regular: {check.witness}")
    res = verify_schur_ring(graph.group, check.partition.classes)
    if not res.ok:
        raise InvariantViolation(f"distance partition of a DRG failed the Schur axioms: {res.witness}")
    return res.ring


def character_class_vector(
    group: AbelianGroup, classes: Sequence[Sequence[int]], gi: int
) -> Tuple[Tuple[int, ...], ...]:
    """Exact key: coefficients of chi_g(N_i) for every class i."""
    m = group.exponent
    g = group.elements()[gi]
    row = group.pairing_row(g)
    key = []
    for cls in classes:
        counts = np.bincount(row[list(cls)], minlength=m)
        key.append(CyclotomicInteger.from_root_counts(m, counts).coeffs)
    return tuple(key)


def dual_schur_ring(ring: SchurRing) -> SchurRing:
    """Schur ring on character-value classes; rank must be preserved."""
    group = ring.group
    buckets: Dict[Tuple, List[int]] = {}
    for gi in range(group.order):
        buckets.setdefault(character_class_vector(group, ring.classes, gi), []).append(gi)
    if len(buckets) != ring.rank:
        raise InvariantViolation(
            f"dual rank {len(buckets)} differs from primal rank {ring.rank}"
        )
    zero = group.index(group.zero)
    classes = sorted(
        (tuple(sorted(v)) for v in buckets.values()),
        key=lambda cls: (zero not in cls, len(cls), cls),
    )
    res = verify_schur_ring(group, classes)
    if not res.ok:
        raise InvariantViolation(f"character classes failed the Schur axioms: {res.witness}")
    return res.ring


@dataclass(frozen=True)
class KreinTensor:
    q: Tensor

    @property
    def rank(self) -> int:
        return len(self.q)

    def to_dict(self) -> dict:
        return {"q": [[[int(x) for x in row] for row in plane] for plane in self.q]}


def krein_parameters(ring: SchurRing) -> KreinTensor:
    """Krein parameters as the structure constants of the dual ring;
    non-negativity and integrality are asserted, not assumed."""
    if not ring.is_symmetric:
        raise SpecError("Krein parameters require a symmetric Schur ring")
    dual = dual_schur_ring(ring)
    for plane in dual.tensor:
        for row in plane:
            if any(x < 0 for x in row):
                raise InvariantViolation("negative Krein parameter")
    return KreinTensor(dual.tensor)


def krein_via_eigenmatrix(ring: SchurRing) -> Tuple[Tuple[Tuple[Fraction, ...], ...], ...]:
    """Independent rational route for integral symmetric schemes:
    q_{ij}^k = (m_i m_j / n) * sum_l P_il P_jl P_kl / k_l^2."""
    if not ring.is_symmetric:
        raise SpecError("eigenmatrix route requires a symmetric Schur ring")
    group = ring.group
    n = group.order
    dual = dual_schur_ring(ring)
    reps = [cls[0] for cls in dual.classes]
    r = ring.rank
    P: List[List[Fraction]] = []
    for gi in reps:
        vec = character_class_vector(group, ring.classes, gi)
        row = []
        for coeffs in vec:
            val = CyclotomicInteger(group.exponent, coeffs)
            if not val.is_rational_integer:
                raise SpecError("eigenmatrix route requires an integral scheme")
            row.append(Fraction(val.as_int()))
        P.append(row)
    mults = [len(cls) for cls in dual.classes]
    sizes = [Fraction(len(cls)) for cls in ring.classes]
    out = []
    for i in range(r):
        plane = []
        for j in range(r):
            row = []
            for k in range(r):
                total = sum(P[i][l] * P[j][l] * P[k][l] / sizes[l] ** 2 for l in range(r))
                row.append(Fraction(mults[i] * mults[j], n) * total)
            plane.append(tuple(row))
        out.append(tuple(plane))
    return tuple(out)


# ---------------------------------------------------------------------------
# polynomial orderings and dual graphs


def _ordering_ok(tensor: Tensor, tau: Sequence[int]) -> bool:
    d = len(tensor) - 1
    for i in range(d + 1):
        for j in range(d + 1):
            for k in range(d + 1):
                if tensor[tau[i]][tau[j]][tau[k]] != 0 and k > i + j:
                    return False
            if i + j <= d and tensor[tau[i]][tau[j]][tau[i + j]] == 0:
                return False
    return True


def _polynomial_orderings(tensor: Tensor) -> List[Tuple[int, ...]]:
    """Orderings passing _ordering_ok, found by walking the chain each
    first class forces: in a valid ordering the only class of tensor
    row (tau[1], tau[i]) not yet placed must be tau[i+1], so candidates
    grow one forced step at a time and dead ends drop out early.  The
    full triangle condition is still checked on every completed chain."""
    d = len(tensor) - 1
    if d == 0:
        return [(0,)]
    out = []
    for t1 in range(1, d + 1):
        tau = [0, t1]
        while len(tau) <= d:
            seen = set(tau)
            nxt = [k for k in range(d + 1) if tensor[t1][tau[-1]][k] and k not in seen]
            if len(nxt) != 1:
                break
            tau.append(nxt[0])
        if len(tau) == d + 1 and _ordering_ok(tensor, tau):
            out.append(tuple(tau))
    return out


def q_polynomial_orderings(ring: SchurRing) -> List[Tuple[int, ...]]:
    """All dual-class orderings satisfying the Q-polynomial conditions
    (triangle vanishing above i+j, non-vanishing at i+j)."""
    if not ring.is_symmetric:
        raise SpecError("Q-polynomial analysis requires a symmetric Schur ring")
    return _polynomial_orderings(krein_parameters(ring).q)


def p_polynomial_orderings(ring: SchurRing) -> List[Tuple[int, ...]]:
    """Orderings making the primal ring P-polynomial (distance-regular)."""
    if not ring.is_symmetric:
        raise SpecError("P-polynomial analysis requires a symmetric Schur ring")
    return _polynomial_orderings(ring.tensor)


def dual_graph(graph: CayleyGraph, tau: Sequence[int], check: Optional[DRGCheck] = None) -> CayleyGraph:
    """Cay(G, level set of tau(1)); re-verified distance-regular with the
    dual classes as distance classes and the Krein tensor as structure."""
    ring = distance_module(graph, check)
    if ring.d == 0:
        raise SpecError("the one-class scheme has no dual graph")
    taus = q_polynomial_orderings(ring)
    tau = tuple(tau)
    if tau not in taus:
        raise SpecError(f"{tau} is not a Q-polynomial ordering of this graph")
    dual = dual_schur_ring(ring)
    els = graph.group.elements()
    conn = [els[i] for i in dual.classes[tau[1]]]
    dgraph = CayleyGraph(graph.group, conn)
    dcheck = check_distance_regular(dgraph)
    if not dcheck.ok:
        raise InvariantViolation("dual graph failed the distance-regularity recheck")
    if dcheck.partition.diameter != ring.d:
        raise InvariantViolation("dual graph diameter differs from the scheme rank")
    for i in range(ring.d + 1):
        if set(dcheck.partition.classes[i]) != set(dual.classes[tau[i]]):
            raise InvariantViolation("dual graph distance classes differ from the dual classes")
    q = krein_parameters(ring).q
    dring = distance_module(dgraph, dcheck)
    for i in range(ring.d + 1):
        for j in range(ring.d + 1):
            for k in range(ring.d + 1):
                if dring.tensor[i][j][k] != q[tau[i]][tau[j]][tau[k]]:
                    raise InvariantViolation(
                        "dual graph intersection numbers differ from the Krein tensor"
                    )
    return dgraph


def tensor_parity_vanishing(tensor: Tensor) -> bool:
    """True iff p_{ij}^k = 0 whenever i+j+k is odd (bipartite-type tensor)."""
    r = len(tensor)
    return all(
        tensor[i][j][k] == 0
        for i in range(r)
        for j in range(r)
        for k in range(r)
        if (i + j + k) % 2 == 1
    )


def tensor_top_vanishing(tensor: Tensor) -> bool:
    """True iff p_{dd}^k = 0 for all k outside {0, d} (antipodal-type tensor)."""
    d = len(tensor) - 1
    return all(tensor[d][d][k] == 0 for k in range(1, d))
