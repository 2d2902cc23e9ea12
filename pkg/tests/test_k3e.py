import itertools
import random

import pytest

from digraphsub.core import (
    bioriented_clique,
    build_digraph,
    directed_cycle,
    k3_minus_e,
    min_out_degree,
)
from digraphsub.errors import PreconditionViolated
from digraphsub.k3e import find_k3e
from digraphsub.oracle import contains_subdivision, validate_certificate

PATTERN = k3_minus_e()


def _check(d, v0=None):
    cert = find_k3e(d, v0)
    report = validate_certificate(d, PATTERN, cert)
    assert report, report.violation
    return cert


class TestDirectCases:
    def test_k3e_itself(self):
        d = PATTERN
        v0 = next(v for v in d.vertices() if d.out_degree(v) == 1)
        cert = _check(d, v0)
        assert set(cert.branch.values()) == {0, 1, 2}

    def test_bivec_k3(self):
        _check(bioriented_clique(3))

    def test_two_triangles_sharing_structure(self):
        # two directed triangles glued on an arc, plus return arcs
        d = build_digraph(4, [(0, 1), (1, 2), (2, 0), (1, 3), (3, 0), (0, 2), (2, 1)])
        _check(d)

    def test_precondition_violated(self):
        with pytest.raises(PreconditionViolated):
            find_k3e(directed_cycle(4))

    def test_tightness_on_digon(self):
        # out-degree 1 everywhere: no subdivision exists
        assert contains_subdivision(bioriented_clique(2), PATTERN) is None


class TestReductions:
    def test_terminal_component_descent(self):
        # a directed triangle feeding into a bioriented triangle: the
        # terminal component carries the certificate
        arcs = [(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 4), (0, 4)]
        arcs += [(3, 4), (4, 3), (3, 5), (5, 3), (4, 5), (5, 4)]
        d = build_digraph(6, arcs)
        cert = _check(d)
        assert cert.vertices() <= {3, 4, 5}

    def test_partition_lift_splices_bridge(self):
        # a one-vertex separator between the start and a rich side forces
        # the separator reduction; the certificate must lift through it
        arcs = [
            (0, 1),          # v0
            (1, 2), (1, 3),
            (2, 0), (2, 3),
            (3, 0), (3, 2),
            (0, 2),
        ]
        d = build_digraph(4, arcs)
        _check(d, v0=0)

    def test_contract_fires_without_common_in_neighbour(self):
        # v0 = 0 with single out-arc to 1; nothing points at both 0 and 1
        arcs = [
            (0, 1),
            (1, 2), (1, 3),
            (2, 3), (2, 4),
            (3, 2), (3, 4),
            (4, 0), (4, 2),
        ]
        d = build_digraph(5, arcs)
        _check(d, v0=0)


def _digraphs_with_min_out(n, k):
    rows = []
    for u in range(n):
        pool = [v for v in range(n) if v != u]
        rows.append(
            [comb for size in range(k, n) for comb in itertools.combinations(pool, size)]
        )
    for combo in itertools.product(*rows):
        yield build_digraph(n, [(u, v) for u, row in enumerate(combo) for v in row])


class TestExhaustiveSmall:
    def test_all_n4_min_out_2(self):
        count = 0
        for d in _digraphs_with_min_out(4, 2):
            _check(d)
            count += 1
        assert count == 4 ** 4  # per-vertex choices: C(3,2) + C(3,3)

    def test_agreement_with_oracle_n4(self):
        # wherever the finder runs, the oracle must also find the pattern
        rng = random.Random(17)
        seen = 0
        for d in _digraphs_with_min_out(4, 2):
            if rng.random() < 0.9:
                continue
            assert contains_subdivision(d, PATTERN) is not None
            seen += 1
        assert seen > 5


class TestRandomisedSoundness:
    def test_random_hosts(self, rng):
        for _ in range(300):
            n = rng.randrange(3, 12)
            arcs = [
                (u, v)
                for u in range(n)
                for v in range(n)
                if u != v and rng.random() < rng.choice((0.3, 0.5, 0.8))
            ]
            d = build_digraph(n, arcs)
            if min_out_degree(d) < 2:
                continue
            _check(d)


class TestOracleAgreementN5:
    def test_sampled_agreement(self):
        # the finder must succeed wherever the degree floor holds, and the
        # oracle must concur on a certificate's existence
        rng = random.Random(55)
        checked = 0
        while checked < 150:
            arcs = [
                (u, v)
                for u in range(5)
                for v in range(5)
                if u != v and rng.random() < 0.55
            ]
            d = build_digraph(5, arcs)
            if min_out_degree(d) < 2:
                continue
            _check(d)
            assert contains_subdivision(d, PATTERN) is not None
            checked += 1
