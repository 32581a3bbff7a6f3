import json
import random

import pytest

from rbt_lab import (
    Graph,
    GraphSystem,
    SearchConfig,
    balanced_bipartite_system,
    bipartite_triple,
    brute_force_max,
    exhaustive_max_product,
    exhaustive_max_sum,
    is_rbt_free,
    local_search_product,
    max_edge_count,
    max_triangle_free_edges,
    two_complete_one_empty,
)
from rbt_lab.search import allowed_last_graph_mask, rbt_free_bits


def system_value(objective: str, s: GraphSystem) -> int:
    counts = s.edge_counts()
    if objective == "sum":
        return sum(counts)
    prod = 1
    for c in counts:
        prod *= c
    return prod


def test_pruned_matches_unpruned_n3():
    assert exhaustive_max_sum(3, 3).best_value == brute_force_max("sum", 3, 3) == 6
    assert exhaustive_max_sum(3, 4).best_value == brute_force_max("sum", 3, 4)
    assert exhaustive_max_product(3).best_value == brute_force_max("product", 3, 3) == 8


def test_pruned_matches_unpruned_n4_product():
    assert exhaustive_max_product(4).best_value == brute_force_max("product", 4, 3) == 64


def test_exhaustive_reference_values():
    assert exhaustive_max_sum(4, 3).best_value == 12
    assert exhaustive_max_sum(4, 4).best_value == 16
    assert exhaustive_max_product(2).best_value == 1
    assert exhaustive_max_sum(2, 4).best_value == 4  # t*floor(4/4), every pair free


def test_iso_pruning_same_value():
    plain = exhaustive_max_sum(4, 3)
    iso = exhaustive_max_sum(4, 3, SearchConfig(iso_pruning=True))
    assert plain.best_value == iso.best_value
    assert iso.nodes < plain.nodes


def test_witnesses_are_free_and_recompute():
    for report, objective in [
        (exhaustive_max_sum(4, 3), "sum"),
        (exhaustive_max_sum(4, 4), "sum"),
        (exhaustive_max_product(4), "product"),
    ]:
        assert report.exhaustive
        assert report.witnesses
        for witness in report.witness_systems():
            assert is_rbt_free(witness)
            assert system_value(objective, witness) == report.best_value


def test_rainbow_bits_matches_system_level():
    rng = random.Random(71)
    for _ in range(500):
        n = rng.randint(3, 6)
        t = rng.randint(1, 4)
        m = max_edge_count(n)
        bits = [rng.randrange(1 << m) for _ in range(t)]
        s = GraphSystem(n=n, graphs=tuple(Graph.from_bits(n, b) for b in bits))
        assert rbt_free_bits(n, bits) == is_rbt_free(s)


def test_allowed_last_mask_is_exact():
    rng = random.Random(72)
    for _ in range(200):
        n = rng.randint(3, 5)
        m = max_edge_count(n)
        while True:
            prefix = [rng.randrange(1 << m) for _ in range(rng.randint(1, 3))]
            if rbt_free_bits(n, prefix):
                break
        allowed = allowed_last_graph_mask(n, prefix)
        for e in range(m):
            extended = prefix + [1 << e]
            assert rbt_free_bits(n, extended) == bool(allowed >> e & 1)
        # the full allowed mask itself is admissible
        assert rbt_free_bits(n, prefix + [allowed])


def test_incremental_toggle_guard_is_exact():
    from rbt_lab.search import _toggle_on_safe, _triangle_tables

    rng = random.Random(73)
    for _ in range(200):
        n = rng.randint(3, 6)
        m = max_edge_count(n)
        while True:
            bits = [rng.randrange(1 << m) for _ in range(3)]
            if rbt_free_bits(n, bits):
                break
        member = [0] * m
        for i, g in enumerate(bits):
            for e in range(m):
                if g >> e & 1:
                    member[e] |= 1 << i
        _, through = _triangle_tables(n)
        i = rng.randrange(3)
        e = rng.randrange(m)
        if member[e] >> i & 1:
            continue
        grown = list(bits)
        grown[i] |= 1 << e
        assert _toggle_on_safe(member, i, e, through[e]) == rbt_free_bits(n, grown)


def test_constructors_attain_bounds():
    for n in range(3, 21):
        s = two_complete_one_empty(n)
        assert is_rbt_free(s) and s.total_edges() == n * (n - 1)
        for t in (1, 4, 8):
            s = balanced_bipartite_system(n, t)
            assert is_rbt_free(s) and s.total_edges() == t * (n * n // 4)
        s = bipartite_triple(n)
        assert system_value("product", s) == (n * n // 4) ** 3


def test_constructor_validation():
    with pytest.raises(ValueError):
        two_complete_one_empty(0)
    with pytest.raises(ValueError):
        balanced_bipartite_system(5, 0)


def test_mantel_maximum_small():
    assert max_triangle_free_edges(2) == 1
    assert max_triangle_free_edges(3) == 2
    assert max_triangle_free_edges(4) == 4
    assert max_triangle_free_edges(5) == 6
    with pytest.raises(ValueError):
        max_triangle_free_edges(7)


def test_budget_enforced(monkeypatch):
    with pytest.raises(ValueError, match="budget"):
        exhaustive_max_sum(6, 3)
    monkeypatch.setenv("RBT_LAB_BUDGET", "20")
    with pytest.raises(ValueError, match="budget"):
        exhaustive_max_sum(4, 4)  # 24 bits > 20
    monkeypatch.setenv("RBT_LAB_BUDGET", "24")
    assert exhaustive_max_sum(4, 4).best_value == 16
    monkeypatch.setenv("RBT_LAB_BUDGET", "bogus")
    with pytest.raises(ValueError):
        exhaustive_max_sum(3, 3)


def test_thread_count_invariance():
    base = exhaustive_max_sum(4, 3, SearchConfig(chunk_size=8))
    threaded = exhaustive_max_sum(4, 3, SearchConfig(chunk_size=8, threads=2))
    assert base.best_value == threaded.best_value
    assert base.witnesses == threaded.witnesses
    assert base.witness_overflow == threaded.witness_overflow


def test_exhaustive_run_to_run_determinism():
    a = exhaustive_max_sum(4, 3, SearchConfig(iso_pruning=True))
    b = exhaustive_max_sum(4, 3, SearchConfig(iso_pruning=True))
    assert (a.best_value, a.witnesses, a.nodes, a.pruned) == (
        b.best_value,
        b.witnesses,
        b.nodes,
        b.pruned,
    )


def test_checkpoint_resume(tmp_path):
    path = tmp_path / "ckpt.json"
    cfg = SearchConfig(chunk_size=8, checkpoint=str(path))
    first = exhaustive_max_product(4, cfg)
    assert path.exists()

    # drop half the chunks and resume; the merged report must be identical
    doc = json.loads(path.read_text())
    done = doc["done"]
    for key in list(done.keys())[::2]:
        del done[key]
    path.write_text(json.dumps(doc))
    resumed = exhaustive_max_product(4, cfg)
    assert resumed.best_value == first.best_value
    assert resumed.witnesses == first.witnesses
    assert resumed.nodes == first.nodes

    # a different setup must refuse the file
    with pytest.raises(ValueError, match="different search"):
        exhaustive_max_sum(4, 3, SearchConfig(chunk_size=8, checkpoint=str(path)))


def test_checkpoint_resume_n5_iso():
    # the intended use: resumable runs at the n=5 budget edge
    import tempfile
    from pathlib import Path

    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "n5.json"
        cfg = SearchConfig(iso_pruning=True, chunk_size=8, checkpoint=str(path))
        plain = exhaustive_max_sum(5, 3, SearchConfig(iso_pruning=True, chunk_size=8))
        first = exhaustive_max_sum(5, 3, cfg)
        assert first.best_value == plain.best_value == 20
        assert first.witnesses == plain.witnesses

        doc = json.loads(path.read_text())
        done = doc["done"]
        assert len(done) > 2
        for key in list(done.keys())[1::2]:
            del done[key]
        path.write_text(json.dumps(doc))
        resumed = exhaustive_max_sum(5, 3, cfg)
        assert resumed.best_value == first.best_value
        assert resumed.witnesses == first.witnesses
        assert resumed.nodes == first.nodes


def test_local_search_consistent_with_conjecture_larger_n():
    # a failure here would mean the hill climber beat floor(n^2/4)^3, i.e. a
    # counterexample to the open product bound; record the witness if so
    for n in (12, 16, 20):
        cfg = SearchConfig(mode="local", seed=2026, iterations=4000, restarts=3)
        report = local_search_product(n, cfg)
        bound = (n * n // 4) ** 3
        assert report.best_value >= report.references["constructor_value"]
        assert report.best_value <= bound, (
            f"product bound exceeded at n={n}: {report.to_json_dict()}"
        )


def test_local_search_matches_exhaustive_n4():
    cfg = SearchConfig(mode="local", seed=11, iterations=2000, restarts=3)
    report = local_search_product(4, cfg)
    assert report.best_value == 64
    assert not report.exhaustive


def test_local_search_seeded_bound_n10():
    cfg = SearchConfig(mode="local", seed=5)
    report = local_search_product(10, cfg)
    assert report.best_value >= 25**3
    assert report.references["constructor_value"] == 25**3


def test_local_search_deterministic():
    cfg = SearchConfig(mode="local", seed=99, iterations=3000, restarts=4)
    a = local_search_product(6, cfg)
    b = local_search_product(6, cfg)
    assert a.best_value == b.best_value
    assert a.witnesses == b.witnesses
    assert a.nodes == b.nodes

    threaded = local_search_product(
        6, SearchConfig(mode="local", seed=99, iterations=3000, restarts=4, threads=2)
    )
    assert threaded.best_value == a.best_value
    assert threaded.witnesses == a.witnesses


def test_local_search_witnesses_are_free():
    cfg = SearchConfig(mode="local", seed=21, iterations=2000, restarts=3)
    report = local_search_product(7, cfg)
    for witness in report.witness_systems():
        assert is_rbt_free(witness)
        assert system_value("product", witness) == report.best_value


def test_local_search_requires_seed():
    with pytest.raises(ValueError, match="seed"):
        SearchConfig(mode="local")
    with pytest.raises(ValueError, match="non-local"):
        local_search_product(4, SearchConfig())


def test_report_json_schema():
    report = exhaustive_max_product(3)
    doc = report.to_json_dict()
    assert doc["best_value"] == "8"
    assert isinstance(doc["witnesses"], list) and doc["witnesses"]
    assert all(isinstance(h, str) for w in doc["witnesses"] for h in w)
    assert doc["references"]["conjecture_bound"] == "8"
    assert doc["exhaustive"] is True


def test_witness_cap_and_overflow():
    report = exhaustive_max_sum(3, 3, SearchConfig(witness_cap=1))
    assert len(report.witnesses) == 1
    full = exhaustive_max_sum(3, 3)
    if len(full.witnesses) > 1:
        assert report.witness_overflow
