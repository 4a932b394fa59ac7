import csv
import json

import pytest

from lincode_es.codes import InstanceError, ProblemInstance
from lincode_es.experiments import (
    ALL_VARIANTS,
    Campaign,
    derive_seed,
    evaluations_used,
    run_campaign,
)
from lincode_es.gf2 import read_matrix, span

TINY = ProblemInstance(3, 1, 3)
SMALL = ProblemInstance(12, 6, 4)


def small_campaign(**kw):
    params = dict(instances=(SMALL,), runs_per_cell=3, master_seed=5, budget=300)
    params.update(kw)
    return Campaign(**params)


def test_tiny_instance_single_run():
    batch = run_campaign(Campaign(instances=(TINY,), variants=("comma",), runs_per_cell=1, budget=500))
    cell = batch.cell(TINY, "comma")
    assert cell.success_count == 1
    assert span(cell.runs[0].best.genotype).codewords == {0, 7}


def test_same_seed_same_summary():
    a = run_campaign(small_campaign()).summary_json()
    b = run_campaign(small_campaign()).summary_json()
    assert a == b
    c = run_campaign(small_campaign(master_seed=6)).summary_json()
    assert c != a


def test_parallel_matches_sequential():
    c = small_campaign(runs_per_cell=2)
    assert run_campaign(c, workers=2).summary_json() == run_campaign(c).summary_json()


def test_evaluation_conventions():
    c = small_campaign(budget=50, trace=True, diversity_every=10, instances=(ProblemInstance(16, 8, 5),))
    batch = run_campaign(c)
    for (inst, label), cell in batch.cells.items():
        per_gen = 16 if label.startswith("comma") else 16 - 5
        for r in cell.runs:
            assert r.evaluations == 16 + 50 * per_gen
            for snap in r.diversity_trace:
                assert snap.evaluations == 16 + snap.generation * per_gen
            if not r.success:
                assert evaluations_used(r) == r.evaluations


def test_seeds_distinct_and_stable():
    seeds = {
        derive_seed(1, inst, v, i)
        for inst in (SMALL, TINY)
        for v in ALL_VARIANTS
        for i in range(20)
    }
    assert len(seeds) == 2 * 4 * 20
    assert derive_seed(1, SMALL, "plus", 3) == derive_seed(1, SMALL, "plus", 3)


def test_summary_contents():
    batch = run_campaign(small_campaign(equivalence=True))
    summary = json.loads(batch.summary_json())
    assert summary["metadata"]["seed_rule"]
    assert "lambda initial" in summary["metadata"]["evaluation_convention"]
    assert len(summary["cells"]) == 4
    for cell in summary["cells"]:
        assert cell["success_count"] <= cell["runs"] == 3
        assert sum(cell["class_sizes"]) == cell["success_count"]
    assert len(summary["comparisons"]) == 6


def test_reference_comparison(tmp_path):
    first = run_campaign(small_campaign(variants=("comma",), runs_per_cell=1))
    ref = tmp_path / "ref.txt"
    first.write(tmp_path / "first")
    ref.write_text((tmp_path / "first" / "12_6_4_comma_0.txt").read_text())
    batch = run_campaign(
        small_campaign(variants=("comma",), runs_per_cell=4, equivalence=True,
                       references={"12,6,4": str(ref)})
    )
    cell = batch.cell(SMALL, "comma")
    assert 0 <= cell.non_equivalent_to_reference <= cell.success_count


def test_write_outputs(tmp_path):
    batch = run_campaign(small_campaign(variants=("plus+xo",), trace=True, diversity_every=100))
    batch.write(tmp_path)
    assert (tmp_path / "summary.json").exists()
    for i in range(3):
        g = read_matrix(tmp_path / f"12_6_4_plus+xo_{i}.txt")
        assert (g.n, g.k) == (12, 6)
        with open(tmp_path / f"trace_12_6_4_plus+xo_{i}.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert list(rows[0]) == [
            "generation", "best_fitness", "avg_fitness", "avg_pairwise_distance", "evaluations"
        ]
        assert [int(r["generation"]) for r in rows] == [0, 100, 200, 300]
    with open(tmp_path / "runs_12_6_4_plus+xo.csv") as fh:
        assert len(list(csv.DictReader(fh))) == 3


def test_from_json(tmp_path):
    doc = {"instances": [{"n": 12, "k": 6, "d": 4}], "variants": ["comma"], "runs": 2,
           "seed": 3, "budget": 10, "diversity_every": 40}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(doc))
    c = Campaign.from_json(path)
    assert c.instances == (SMALL,) and c.runs_per_cell == 2 and c.budget == 10
    with pytest.raises(ValueError):
        Campaign.from_json({**doc, "bogus": 1})
    with pytest.raises(ValueError):
        Campaign.from_json({**doc, "variants": ["mystery"]})
    with pytest.raises(InstanceError):
        Campaign.from_json({**doc, "instances": [{"n": 10, "k": 5, "d": 7}]})
