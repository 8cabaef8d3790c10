import io
import random
from itertools import combinations

import pytest

from scholarcomm.errors import UniverseMismatch
from scholarcomm.evaluation import PlantedSpec, generate_planted
from scholarcomm.graph import CoAuthorNetwork
from scholarcomm.partition import Partition
from scholarcomm.predict import (
    Aggregator,
    PredictedNetwork,
    PredictedRelation,
    connectivity_weight,
    generate_patterns,
    read_predictions,
    write_predictions,
)

from conftest import scores


def network(researchers, pairs):
    return CoAuthorNetwork(frozenset(researchers), {tuple(sorted(p)): frozenset({"p"}) for p in pairs})


def test_connectivity_weight_examples():
    sc = scores([("a", "b", 0.8), ("b", "c", 0.6), ("a", "c", 0.4)])
    assert connectivity_weight(["a"], sc) == 0.0
    assert connectivity_weight("abc", sc, Aggregator.AVERAGE) == pytest.approx(0.6, abs=1e-12)
    assert connectivity_weight("abc", sc, "min") == 0.4
    assert connectivity_weight("abc", sc, "product") == pytest.approx(0.8 * 0.6 * 0.4)


def test_pair_local_weight():
    sc = scores([("a", "b", 0.8), ("b", "c", 0.6), ("c", "d", 0.2)])
    # scores touching a or d inside {a,b,c,d}: a-b and c-d
    assert connectivity_weight("abcd", sc, "avg", ("a", "d")) == pytest.approx(0.5)


def test_aggregator_parsing():
    assert Aggregator.parse("average") is Aggregator.AVERAGE
    assert Aggregator.parse("MIN") is Aggregator.MINIMUM
    with pytest.raises(ValueError):
        Aggregator.parse("median")


def test_unlinked_member_gets_predictions():
    people = ["Ada", "Ben", "Cleo"]
    sc = scores([("Ada", "Ben", 0.8), ("Ben", "Cleo", 0.7), ("Ada", "Cleo", 0.6)])
    observed = network(people, [("Ada", "Ben")])
    preds = generate_patterns(Partition.from_groups([people]), sc, observed)
    assert sorted(preds.pairs()) == [("Ada", "Cleo"), ("Ben", "Cleo")]
    assert [r.weight for r in preds] == pytest.approx([0.7, 0.7])


def test_all_singletons_and_fully_observed():
    sc = scores([("a", "b", 0.9), ("b", "c", 0.9), ("a", "c", 0.9)])
    observed = network("abc", [])
    assert len(generate_patterns(Partition.from_groups(["a", "b", "c"]), sc, observed)) == 0
    full = network("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    assert len(generate_patterns(Partition.from_groups(["abc"]), sc, full)) == 0


def test_universe_mismatch():
    sc = scores([("a", "b", 0.9)])
    with pytest.raises(UniverseMismatch):
        generate_patterns(Partition.from_groups(["ab"]), sc, network("a", []))


def test_min_weight_monotone():
    rng = random.Random(1)
    ids = [f"r{i}" for i in range(12)]
    sc = scores([(a, b, rng.random()) for a, b in combinations(ids, 2) if rng.random() < 0.5])
    part = Partition.from_labels({e: i % 4 for i, e in enumerate(ids)})
    observed = network(ids, [p for p in combinations(ids, 2) if rng.random() < 0.2])
    previous = None
    for floor in (0.0, 0.2, 0.4, 0.6, 0.8, 1.0):
        got = set(generate_patterns(part, sc, observed, "avg", floor, pair_local=True).pairs())
        if previous is not None:
            assert got <= previous
        previous = got


@pytest.mark.parametrize("seed", range(5))
def test_held_out_intra_edge_recovered(seed):
    sc, truth = generate_planted(PlantedSpec(15, 3, seed=seed))
    intra = [p for c in truth for p in combinations(sorted(c.members), 2)]
    held = random.Random(seed).choice(intra)
    observed = network(sc.universe, [p for p in intra if p != held])
    preds = generate_patterns(truth, sc, observed)
    assert preds.pairs() == [held]
    cross_max = max(s for (a, b), s in sc.scores.items() if truth.labels()[a] != truth.labels()[b])
    assert preds.relations[0].weight >= cross_max


def test_network_sorted_and_duplicates_rejected():
    rels = (PredictedRelation("a", "b", 0.2, 0), PredictedRelation("c", "d", 0.9, 1),
            PredictedRelation("a", "c", 0.2, 0))
    net = PredictedNetwork(rels)
    assert net.pairs() == [("c", "d"), ("a", "b"), ("a", "c")]
    assert [r.pair for r in net.top(2)] == [("c", "d"), ("a", "b")]
    with pytest.raises(ValueError):
        PredictedNetwork(rels + (PredictedRelation("a", "b", 0.5, 2),))


def test_prediction_file_round_trip():
    net = PredictedNetwork((PredictedRelation("a", "b", 1 / 3, 0), PredictedRelation("c", "d", 0.9, 1)))
    text = write_predictions(net)
    assert text.splitlines()[0] == "c\td\t0.9\t1"
    assert read_predictions(io.StringIO(text)) == net
