import itertools as it

import pytest

from drgcayley.errors import InvariantViolation, SpecError
from drgcayley.graphs import CayleyGraph, check_distance_regular, spectrum
from drgcayley.groups import atoms, make_group
from drgcayley.schur import (
    distance_module,
    dual_graph,
    dual_schur_ring,
    krein_parameters,
    krein_via_eigenmatrix,
    p_polynomial_orderings,
    q_polynomial_orderings,
    tensor_parity_vanishing,
    tensor_top_vanishing,
    verify_schur_ring,
)

from test_graphs import (
    cay,
    complete_graph,
    crown_graph_z6z3,
    cycle_graph,
    hypercube4,
    srg942,
    taylor_cover_z2_5,
)


def trivial_partition(g):
    return [[g.index(g.zero)], [i for i in range(g.order) if i != g.index(g.zero)]]


def test_verify_trivial_ring():
    g = make_group([5])
    res = verify_schur_ring(g, trivial_partition(g))
    assert res.ok and res.ring.rank == 2
    assert res.ring.tensor[1][1] == (4, 3)  # (G\0)^2 = 4e + 3(G\0)


def test_verify_rejects_non_inverse_closed():
    g = make_group([5])
    res = verify_schur_ring(g, [[0], [1], [2, 3, 4]])
    assert not res.ok


def test_verify_rejects_non_partition():
    g = make_group([5])
    assert not verify_schur_ring(g, [[0], [1, 1, 2, 3, 4]]).ok
    assert not verify_schur_ring(g, [[0, 1], [2, 3, 4]]).ok  # identity class too big


def test_atom_partition_is_schur_ring():
    for mods in ([12], [6, 3], [2, 2, 2]):
        g = make_group(mods)
        parts = [[g.index(e) for e in part] for part in atoms(g)]
        assert verify_schur_ring(g, parts).ok


def test_distance_module_srg():
    ring = distance_module(srg942())
    assert ring.rank == 3
    assert ring.is_primitive
    assert ring.is_symmetric
    # p_{11}^k encodes the intersection array: k=4, lambda=1, mu=2
    assert ring.tensor[1][1] == (4, 1, 2)


def test_distance_module_c6_imprimitive():
    ring = distance_module(cycle_graph(6))
    assert ring.rank == 4
    assert not ring.is_primitive


def test_distance_module_requires_drg():
    with pytest.raises(SpecError):
        distance_module(cay([6], [[2], [3], [4]]))


def test_dual_of_trivial_is_trivial():
    g = make_group([5])
    ring = verify_schur_ring(g, trivial_partition(g)).ring
    dual = dual_schur_ring(ring)
    assert dual.partition_key() == ring.partition_key()


def test_pentagon_self_dual():
    ring = distance_module(cycle_graph(5))
    dual = dual_schur_ring(ring)
    assert dual.rank == 3
    assert dual.partition_key() == ring.partition_key()


def test_dual_classes_are_eigenvalue_level_sets():
    for gr in (srg942(), crown_graph_z6z3(), cycle_graph(6)):
        ring = distance_module(gr)
        dual = dual_schur_ring(ring)
        eig = spectrum(gr)
        level_key = frozenset(frozenset(lev) for lev in eig.level_sets)
        # every dual class is a union of level sets; for these fixtures they coincide
        assert dual.partition_key() == level_key


def test_bidual_partition_equality():
    fixtures = [
        complete_graph([3, 3]),
        cycle_graph(5),
        cycle_graph(6),
        srg942(),
        crown_graph_z6z3(),
        hypercube4(),
        taylor_cover_z2_5(),
    ]
    for gr in fixtures:
        ring = distance_module(gr)
        assert dual_schur_ring(dual_schur_ring(ring)).partition_key() == ring.partition_key()


def test_krein_trivial_ring_z9():
    g = make_group([9])
    ring = verify_schur_ring(g, trivial_partition(g)).ring
    q = krein_parameters(ring).q
    assert q[1][1][1] == 7  # |G| - 2


def test_krein_nonnegative_integer_everywhere():
    for gr in (srg942(), crown_graph_z6z3(), cycle_graph(6), hypercube4(), taylor_cover_z2_5()):
        q = krein_parameters(distance_module(gr)).q
        assert all(x >= 0 for plane in q for row in plane for x in row)


def test_krein_matches_eigenmatrix_route():
    for gr in (complete_graph([3, 3]), srg942(), cycle_graph(6), crown_graph_z6z3(), hypercube4()):
        ring = distance_module(gr)
        q = krein_parameters(ring).q
        q2 = krein_via_eigenmatrix(ring)
        r = ring.rank
        for i, j, k in it.product(range(r), repeat=3):
            assert q2[i][j][k] == q[i][j][k]


def test_eigenmatrix_route_rejects_irrational():
    with pytest.raises(SpecError):
        krein_via_eigenmatrix(distance_module(cycle_graph(5)))


def test_q_polynomial_orderings_exist():
    g = make_group([5])
    ring = verify_schur_ring(g, trivial_partition(g)).ring
    assert q_polynomial_orderings(ring) == [(0, 1)]
    assert len(q_polynomial_orderings(distance_module(srg942()))) >= 1
    assert len(q_polynomial_orderings(distance_module(crown_graph_z6z3()))) >= 1


def test_p_polynomial_identity_ordering():
    for gr in (srg942(), crown_graph_z6z3(), cycle_graph(6)):
        ring = distance_module(gr)
        taus = p_polynomial_orderings(ring)
        assert tuple(range(ring.rank)) in taus
        # every P-polynomial ordering yields a distance-regular Cayley graph
        els = gr.group.elements()
        for tau in taus:
            conn = [els[i] for i in ring.classes[tau[1]]]
            res = check_distance_regular(CayleyGraph(gr.group, conn))
            assert res.ok
            for i in range(ring.rank):
                assert set(res.partition.classes[i]) == set(ring.classes[tau[i]])


def test_bipartite_iff_q_antipodal():
    # tensor-level: bipartite primal <-> top-vanishing dual under a Q-ordering
    cases = [
        (cycle_graph(6), True),
        (crown_graph_z6z3(), True),
        (hypercube4(), True),
        (srg942(), False),
        (taylor_cover_z2_5(), False),
    ]
    for gr, bip in cases:
        ring = distance_module(gr)
        assert tensor_parity_vanishing(ring.tensor) == bip
        q = krein_parameters(ring).q
        relabeled = []
        for tau in q_polynomial_orderings(ring):
            rl = tuple(
                tuple(tuple(q[tau[i]][tau[j]][tau[k]] for k in range(ring.rank)) for j in range(ring.rank))
                for i in range(ring.rank)
            )
            relabeled.append(tensor_top_vanishing(rl))
        assert any(relabeled) == bip


def test_antipodal_iff_q_bipartite():
    cases = [
        (cycle_graph(6), True),
        (crown_graph_z6z3(), True),
        (taylor_cover_z2_5(), True),
        (srg942(), False),
    ]
    for gr, anti in cases:
        ring = distance_module(gr)
        assert tensor_top_vanishing(ring.tensor) == anti
        q = krein_parameters(ring).q
        relabeled = []
        for tau in q_polynomial_orderings(ring):
            rl = tuple(
                tuple(tuple(q[tau[i]][tau[j]][tau[k]] for k in range(ring.rank)) for j in range(ring.rank))
                for i in range(ring.rank)
            )
            relabeled.append(tensor_parity_vanishing(rl))
        assert any(relabeled) == anti


def test_dual_graph_k9():
    gr = complete_graph([3, 3])
    dg = dual_graph(gr, (0, 1))
    assert dg.degree == 8  # K_9 is self-dual


def test_dual_graph_pentagon():
    gr = cycle_graph(5)
    taus = q_polynomial_orderings(distance_module(gr))
    assert taus
    for tau in taus:
        dg = dual_graph(gr, tau)
        assert check_distance_regular(dg).array.b == (2, 1)


def test_dual_graph_every_ordering_in_corpus():
    for gr in (srg942(), cycle_graph(6), crown_graph_z6z3(), hypercube4(), taylor_cover_z2_5()):
        ring = distance_module(gr)
        for tau in q_polynomial_orderings(ring):
            dg = dual_graph(gr, tau)
            assert check_distance_regular(dg).ok


def test_dual_graph_rejects_bad_ordering():
    with pytest.raises(SpecError):
        dual_graph(srg942(), (0, 1))  # wrong length for a rank-3 module
    with pytest.raises(SpecError):
        dual_graph(srg942(), (1, 0, 2))  # does not fix the identity class
