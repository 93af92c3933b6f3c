from __future__ import annotations

import json

from eqlist.graph import cycle_graph
from eqlist.report import report_emit
from eqlist.theorem import satisfies_hypothesis, verify_theorem


def test_c4_in_scope():
    assert satisfies_hypothesis(cycle_graph(4), 3)


def test_small_exhaustive_both_k():
    for k in (3, 4):
        rep = verify_theorem(k, 1, 6, "exhaustive")
        assert rep.ok and not rep.violations
        assert all(t.complete and t.verdicts["no"] == 0 for t in rep.tiers)
        assert sum(t.graphs_seen for t in rep.tiers) == 1 + 1 + 2 + 6 + 21 + 112


def test_random_tier_is_reproducible():
    a = report_emit("verify-theorem", verify_theorem(3, 8, 8, "random", seed=7, count=20))
    b = report_emit("verify-theorem", verify_theorem(3, 8, 8, "random", seed=7, count=20))
    assert a == b
    doc = json.loads(a)
    tier = doc["result"]["tiers"][0]
    assert tier["complete"] is False and tier["graphs_checked"] == 20
    assert tier["verdicts"]["yes"] == 0       # sampled lists never certify
